//! Linear-algebra solver: the closed-neighborhood matrix `A + I` over GF(2).
//!
//! Pressing set `x` changes a configuration by `(A + I) x`, so reaching a
//! target delta `b` means solving `(A + I) x = b`. Solutions differ by quiet
//! patterns, the nullspace of `A + I`.

use std::cmp::Ordering;

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::BitVector;
use crate::error::GraphError;
use crate::graph::{Configuration, Graph, PressSet};

pub const DEFAULT_NULLITY_CAP: usize = 24;

/// Coset enumeration fans out across threads from this nullity on.
const PARALLEL_NULLITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("nullity {nullity} exceeds the cap of {cap} for minimum-weight search")]
    NullityCapExceeded { nullity: usize, cap: usize },
    #[error("solver invariant violated: all-ones delta reported unsolvable on {n} vertices")]
    ComplementUnsolvable { n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Dense matrix over GF(2) with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    width: usize,
    rows: Vec<BitVector>,
}

impl Gf2Matrix {
    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            width,
            rows: vec![BitVector::zeros(width); height],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            width: n,
            rows: (0..n).map(|i| BitVector::from_indices(n, [i])).collect(),
        }
    }

    /// Panics if a row's length differs from `width`.
    pub fn from_rows(rows: Vec<BitVector>, width: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == width), "row width mismatch");
        Self { width, rows }
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.rows[row].set(col, value);
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// `M · x`.
    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.width, "vector length must equal matrix width");
        let mut out = BitVector::zeros(self.height());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        eliminate(self).rank()
    }
}

impl std::fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list()
            .entries(self.rows.iter().map(BitVector::to_bitstring))
            .finish()
    }
}

/// `A + I` for `g`: entry `(i, j)` is set iff `i == j` or `j ∈ N(i)`.
pub fn build_system(g: &Graph) -> Gf2Matrix {
    Gf2Matrix {
        width: g.n(),
        rows: (0..g.n()).map(|v| g.closed_neighborhood(v)).collect(),
    }
}

/// Reduced row echelon form together with the row operations that produced it.
#[derive(Debug, Clone)]
pub struct Echelon {
    reduced: Gf2Matrix,
    /// `transform · original = reduced`.
    transform: Gf2Matrix,
    pivot_cols: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn reduced(&self) -> &Gf2Matrix {
        &self.reduced
    }

    pub fn transform(&self) -> &Gf2Matrix {
        &self.transform
    }

    /// Pivot column of each of the first `rank` rows.
    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    /// One solution of `original · x = b` with every free variable 0, if consistent.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.transform.width(), "right-hand side has wrong length");
        let y = self.transform.mul_vec(b);
        if y.next_one(self.rank()).is_some() {
            return None;
        }
        let mut x = BitVector::zeros(self.reduced.width());
        for (r, &col) in self.pivot_cols.iter().enumerate() {
            if y.get(r) {
                x.set(col, true);
            }
        }
        Some(x)
    }

    /// One basis vector per free column, in ascending column order.
    pub fn nullspace_basis(&self) -> Vec<BitVector> {
        let width = self.reduced.width();
        let mut is_pivot = vec![false; width];
        for &c in &self.pivot_cols {
            is_pivot[c] = true;
        }
        (0..width)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::from_indices(width, [f]);
                for (r, &col) in self.pivot_cols.iter().enumerate() {
                    if self.reduced.get(r, f) {
                        v.set(col, true);
                    }
                }
                v
            })
            .collect()
    }
}

/// Gauss-Jordan elimination. The pivot for each column is the lowest-index
/// remaining row holding a 1 there.
pub fn eliminate(m: &Gf2Matrix) -> Echelon {
    let mut reduced = m.clone();
    let mut transform = Gf2Matrix::identity(m.height());
    let mut pivot_cols = Vec::new();

    for col in 0..m.width() {
        let rank = pivot_cols.len();
        if rank == m.height() {
            break;
        }
        let Some(p) = (rank..m.height()).find(|&r| reduced.rows[r].get(col)) else {
            continue;
        };
        reduced.rows.swap(rank, p);
        transform.rows.swap(rank, p);
        let pivot_row = reduced.rows[rank].clone();
        let pivot_ops = transform.rows[rank].clone();
        for r in 0..m.height() {
            if r != rank && reduced.rows[r].get(col) {
                reduced.rows[r] ^= &pivot_row;
                transform.rows[r] ^= &pivot_ops;
            }
        }
        pivot_cols.push(col);
    }

    Echelon {
        reduced,
        transform,
        pivot_cols,
    }
}

/// A solvable system's full solution set: `particular ⊕ span(nullspace_basis)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub particular: PressSet,
    pub nullspace_basis: Vec<PressSet>,
    pub rank: usize,
}

impl SolveOutcome {
    pub fn nullity(&self) -> usize {
        self.nullspace_basis.len()
    }

    /// `2^nullity`, when it fits.
    pub fn solution_count(&self) -> Option<u128> {
        1u128.checked_shl(self.nullity() as u32)
    }

    /// Whether `a ⊕ b` is a quiet pattern, i.e. both press-sets have the same effect.
    pub fn same_coset(&self, a: &PressSet, b: &PressSet) -> bool {
        span_contains(&self.nullspace_basis, &(a ^ b))
    }
}

/// Whether `v` is a GF(2) combination of `basis`, by reducing it against the
/// basis in echelon form.
pub fn span_contains(basis: &[PressSet], v: &PressSet) -> bool {
    let width = v.len();
    let rows = basis.iter().map(|b| b.bits().clone()).collect();
    let echelon = eliminate(&Gf2Matrix::from_rows(rows, width));
    let mut rest = v.bits().clone();
    for (r, &col) in echelon.pivot_cols().iter().enumerate() {
        if rest.get(col) {
            rest ^= echelon.reduced().row(r);
        }
    }
    rest.is_zero()
}

/// The eliminated system of one graph, reusable across targets.
#[derive(Debug, Clone)]
pub struct LightsOutSystem {
    n: usize,
    echelon: Echelon,
    basis: Vec<PressSet>,
}

impl LightsOutSystem {
    pub fn new(g: &Graph) -> Self {
        let echelon = eliminate(&build_system(g));
        let basis = echelon.nullspace_basis().into_iter().map(PressSet).collect();
        Self {
            n: g.n(),
            echelon,
            basis,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn nullity(&self) -> usize {
        self.basis.len()
    }

    pub fn nullspace_basis(&self) -> &[PressSet] {
        &self.basis
    }

    /// `None` when no press-set has the requested effect.
    pub fn solve(&self, target: &Configuration) -> Result<Option<SolveOutcome>, GraphError> {
        if target.len() != self.n {
            return Err(GraphError::LengthMismatch {
                expected: self.n,
                found: target.len(),
            });
        }
        Ok(self.echelon.solve(target.bits()).map(|x| SolveOutcome {
            particular: PressSet(x),
            nullspace_basis: self.basis.clone(),
            rank: self.rank(),
        }))
    }
}

/// All press-sets whose effect on `g` equals `target`, or `None` if there are none.
pub fn solve(g: &Graph, target: &Configuration) -> Result<Option<SolveOutcome>, GraphError> {
    LightsOutSystem::new(g).solve(target)
}

/// Press-sets that turn every configuration into its complement.
pub fn solve_complement(g: &Graph) -> Result<SolveOutcome, Gf2Error> {
    solve(g, &Configuration::ones(g.n()))?.ok_or(Gf2Error::ComplementUnsolvable { n: g.n() })
}

/// Press-sets taking `from` to `to`.
pub fn solve_transition(
    g: &Graph,
    from: &Configuration,
    to: &Configuration,
) -> Result<Option<SolveOutcome>, GraphError> {
    if from.len() != to.len() {
        return Err(GraphError::LengthMismatch {
            expected: from.len(),
            found: to.len(),
        });
    }
    solve(g, &(from ^ to))
}

/// Weight first, then the integer value of the mask with vertex 0 least significant.
fn better(a: &BitVector, b: &BitVector) -> bool {
    match a.count_ones().cmp(&b.count_ones()) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a.cmp_as_integer(b) == Ordering::Less,
    }
}

/// Minimum over `start ⊕ span(basis[..low])`, walked in Gray-code order.
fn min_over_coset(start: BitVector, basis: &[PressSet], low: usize) -> BitVector {
    let mut current = start;
    let mut best = current.clone();
    for step in 1u64..(1u64 << low) {
        current ^= basis[step.trailing_zeros() as usize].bits();
        if better(&current, &best) {
            best.clone_from(&current);
        }
    }
    best
}

/// The lightest member of the solution coset. Among equally light sets the
/// smallest mask wins, reading vertex `i` as bit `i` of an integer.
pub fn min_weight_solution(outcome: &SolveOutcome, nullity_cap: usize) -> Result<PressSet, Gf2Error> {
    let d = outcome.nullity();
    if d > nullity_cap {
        return Err(Gf2Error::NullityCapExceeded {
            nullity: d,
            cap: nullity_cap,
        });
    }
    if d > 63 {
        return Err(Gf2Error::NullityCapExceeded { nullity: d, cap: 63 });
    }
    let basis = &outcome.nullspace_basis;
    let start = outcome.particular.bits().clone();
    if d < PARALLEL_NULLITY {
        return Ok(PressSet(min_over_coset(start, basis, d)));
    }

    // fix the top bits of the combination per task, walk the rest
    let high = 8.min(d);
    let low = d - high;
    let best = (0u64..(1u64 << high))
        .into_par_iter()
        .map(|prefix| {
            let mut offset = start.clone();
            for k in 0..high {
                if (prefix >> k) & 1 == 1 {
                    offset ^= basis[low + k].bits();
                }
            }
            min_over_coset(offset, basis, low)
        })
        .reduce_with(|a, b| if better(&b, &a) { b } else { a })
        .expect("at least one task");
    Ok(PressSet(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphKind};
    use proptest::prelude::*;

    fn graph(kind: GraphKind) -> Graph {
        generate(&kind, None).unwrap()
    }

    fn k2() -> Graph {
        graph(GraphKind::Complete { n: 2 })
    }

    fn bits(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    /// Unpacked single-bit elimination used as an independent rank oracle.
    fn naive_rank(rows: &[Vec<u8>]) -> usize {
        let mut rows = rows.to_vec();
        let width = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..width {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] == 1 {
                    row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn build_system_examples() {
        let p3 = build_system(&graph(GraphKind::Path { n: 3 }));
        let rows: Vec<_> = p3.rows().iter().map(BitVector::to_bitstring).collect();
        assert_eq!(rows, ["110", "111", "011"]);
        assert_eq!(build_system(&Graph::empty(1)), Gf2Matrix::identity(1));
        let k4 = build_system(&graph(GraphKind::Complete { n: 4 }));
        assert!(k4.rows().iter().all(BitVector::is_all_ones));
    }

    #[test]
    fn eliminate_examples() {
        assert_eq!(eliminate(&build_system(&graph(GraphKind::Path { n: 3 }))).rank(), 3);
        assert_eq!(eliminate(&build_system(&graph(GraphKind::Complete { n: 4 }))).rank(), 1);
        assert_eq!(eliminate(&build_system(&k2())).rank(), 1);
    }

    #[test]
    fn eliminate_records_row_operations() {
        let m = build_system(&graph(GraphKind::Grid { rows: 3, cols: 3 }));
        let e = eliminate(&m);
        for (r, row) in e.transform().rows().iter().enumerate() {
            // row r of transform · m
            let mut combo = BitVector::zeros(m.width());
            for i in row.iter_ones() {
                combo ^= m.row(i);
            }
            assert_eq!(&combo, e.reduced().row(r));
        }
    }

    #[test]
    fn solve_examples() {
        let p3 = graph(GraphKind::Path { n: 3 });
        let out = solve(&p3, &Configuration::ones(3)).unwrap().unwrap();
        assert_eq!(out.particular, PressSet::from_indices(3, [1]));
        assert_eq!(out.nullity(), 0);

        assert_eq!(solve(&k2(), &"01".parse().unwrap()).unwrap(), None);

        let k4 = graph(GraphKind::Complete { n: 4 });
        let out = solve(&k4, &Configuration::ones(4)).unwrap().unwrap();
        assert_eq!(out.solution_count(), Some(8));
        assert_eq!(out.particular.weight() % 2, 1);
        assert!(k4.effect(&out.particular).unwrap().is_all_ones());
    }

    #[test]
    fn solve_rejects_wrong_length() {
        assert!(solve(&k2(), &"011".parse().unwrap()).is_err());
    }

    #[test]
    fn solve_complement_examples() {
        let p4 = graph(GraphKind::Path { n: 4 });
        let out = solve_complement(&p4).unwrap();
        assert!(p4.effect(&out.particular).unwrap().is_all_ones());
        assert!(out.same_coset(&out.particular, &PressSet::from_indices(4, [0, 3])));

        let c4 = graph(GraphKind::Cycle { n: 4 });
        let out = solve_complement(&c4).unwrap();
        assert_eq!(out.rank, 4);
        assert_eq!(out.particular, PressSet::ones(4));

        let out = solve_complement(&Graph::empty(0)).unwrap();
        assert_eq!(out.particular, PressSet::zeros(0));
    }

    #[test]
    fn solve_transition_examples() {
        let p3 = graph(GraphKind::Path { n: 3 });
        let c: Configuration = "010".parse().unwrap();
        let out = solve_transition(&p3, &c, &c).unwrap().unwrap();
        assert_eq!(out.particular, PressSet::zeros(3));

        assert_eq!(
            solve_transition(&k2(), &"00".parse().unwrap(), &"01".parse().unwrap()).unwrap(),
            None
        );

        let out = solve_transition(&p3, &"101".parse().unwrap(), &"010".parse().unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(out.particular, PressSet::from_indices(3, [1]));
    }

    #[test]
    fn min_weight_examples() {
        let k4 = graph(GraphKind::Complete { n: 4 });
        let out = solve_complement(&k4).unwrap();
        assert_eq!(
            min_weight_solution(&out, DEFAULT_NULLITY_CAP).unwrap(),
            PressSet::from_indices(4, [0])
        );

        let p3 = graph(GraphKind::Path { n: 3 });
        let out = solve_complement(&p3).unwrap();
        assert_eq!(min_weight_solution(&out, 0).unwrap(), PressSet::from_indices(3, [1]));

        let g5 = graph(GraphKind::Grid { rows: 5, cols: 5 });
        let out = solve_complement(&g5).unwrap();
        let best = min_weight_solution(&out, DEFAULT_NULLITY_CAP).unwrap();
        // four all-ones solutions, all of weight 15, found by independent light-chasing;
        // this one has the smallest mask
        assert_eq!(best.weight(), 15);
        assert_eq!(best.to_bitstring(), "0110101110001111101111000");
    }

    #[test]
    fn min_weight_cap_error_names_values() {
        let k4 = graph(GraphKind::Complete { n: 4 });
        let out = solve_complement(&k4).unwrap();
        let err = min_weight_solution(&out, 2).unwrap_err();
        assert_eq!(err, Gf2Error::NullityCapExceeded { nullity: 3, cap: 2 });
        assert!(err.to_string().contains('3') && err.to_string().contains('2'));
    }

    #[test]
    fn parallel_search_matches_serial() {
        // A + I of K18 is all ones: rank 1, nullity 17, every odd subset solves
        let k = graph(GraphKind::Complete { n: 18 });
        let out = solve_complement(&k).unwrap();
        assert_eq!(out.nullity(), 17);
        let parallel = min_weight_solution(&out, DEFAULT_NULLITY_CAP).unwrap();
        let serial = min_over_coset(out.particular.bits().clone(), &out.nullspace_basis, 17);
        assert_eq!(parallel.bits(), &serial);
        assert_eq!(parallel, PressSet::from_indices(18, [0]));
    }

    #[test]
    fn nullspace_vectors_are_quiet() {
        let g = graph(GraphKind::Grid { rows: 5, cols: 5 });
        let sys = LightsOutSystem::new(&g);
        assert_eq!((sys.rank(), sys.nullity()), (23, 2));
        for b in sys.nullspace_basis() {
            assert!(g.effect(b).unwrap().is_zero());
        }
    }

    #[test]
    fn span_membership() {
        let basis = vec![PressSet(bits("1100")), PressSet(bits("0110"))];
        assert!(span_contains(&basis, &PressSet(bits("1010"))));
        assert!(span_contains(&basis, &PressSet(bits("0000"))));
        assert!(!span_contains(&basis, &PressSet(bits("0001"))));
        assert!(span_contains(&[], &PressSet(bits("000"))));
    }

    fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<u8>>> {
        (0usize..=64, 0usize..=64)
            .prop_flat_map(|(h, w)| proptest::collection::vec(proptest::collection::vec(0u8..=1, w), h))
    }

    proptest! {
        #[test]
        fn packed_rank_matches_naive(rows in matrix_strategy()) {
            let width = rows.first().map_or(0, Vec::len);
            let packed = Gf2Matrix::from_rows(
                rows.iter()
                    .map(|r| BitVector::from_indices(width, r.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i)))
                    .collect(),
                width,
            );
            prop_assert_eq!(packed.rank(), naive_rank(&rows));
        }
    }
}
