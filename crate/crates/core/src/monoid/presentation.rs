//! Finitely generated submonoids of `Z^d`.
//!
//! A presentation carries the generated lattice, a grading functional that
//! is positive on every non-unit generator and zero on the units, the unit
//! lattice, and the atoms modulo units. Every membership and factorization
//! question reduces to a grading-bounded backtracking search whose leaves are
//! checked against the unit lattice, so all searches terminate.

use crate::error::{Error, Result};
use crate::lattice::{normal_vector, Lattice};
use crate::monoid::budget::Meter;
use crate::monoid::Tri;
use crate::scalar::gcd_all;

#[derive(Clone, Debug)]
pub struct FgPresentation {
    dim: usize,
    generators: Vec<Vec<i64>>,
    lattice: Lattice<i64>,
    grading: Vec<i64>,
    grades: Vec<i64>,
    units: Lattice<i64>,
    atoms: Vec<Vec<i64>>,
    atom_grades: Vec<i64>,
}

const BUILD_NODE_LIMIT: u64 = 50_000_000;

impl FgPresentation {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        let generators: Vec<Vec<i64>> = generators.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
        let lattice = Lattice::from_generators(dim, &generators);
        let coords: Vec<Vec<i64>> =
            generators.iter().map(|g| lattice.coordinates(g).expect("generator lies in its own lattice")).collect();
        let grading = relative_interior_functional(&coords, lattice.rank());
        let grades: Vec<i64> = coords.iter().map(|c| dot(&grading, c)).collect();
        let unit_gens: Vec<Vec<i64>> =
            generators.iter().zip(&grades).filter(|(_, &g)| g == 0).map(|(v, _)| v.clone()).collect();
        let units = Lattice::from_generators(dim, &unit_gens);
        let mut p = FgPresentation {
            dim,
            generators,
            lattice,
            grading,
            grades,
            units,
            atoms: Vec::new(),
            atom_grades: Vec::new(),
        };
        p.compute_atoms()?;
        Ok(p)
    }

    fn compute_atoms(&mut self) -> Result<()> {
        let mut order: Vec<usize> = (0..self.generators.len()).filter(|&i| self.grades[i] > 0).collect();
        order.sort_by(|&a, &b| self.grades[a].cmp(&self.grades[b]).then(self.generators[a].cmp(&self.generators[b])));
        let mut meter = Meter::with_limit(BUILD_NODE_LIMIT);
        let mut atoms: Vec<Vec<i64>> = Vec::new();
        for &i in &order {
            let g = &self.generators[i];
            if atoms.iter().any(|a| self.units.contains(&sub(g, a))) {
                continue;
            }
            let mut decomposable = false;
            for &j in &order {
                if self.grades[j] >= self.grades[i] {
                    break;
                }
                match self.contains_with(&sub(g, &self.generators[j]), &mut meter) {
                    Tri::Yes => {
                        decomposable = true;
                        break;
                    }
                    Tri::No => {}
                    Tri::Unknown => return Err(Error::Unsupported("atom computation exceeded its node limit".into())),
                }
            }
            if !decomposable {
                atoms.push(g.clone());
            }
        }
        // canonical representative of each class modulo units: lexicographically least generator
        let mut reps: Vec<Vec<i64>> = Vec::new();
        for a in atoms {
            let class_min =
                self.generators.iter().filter(|g| self.units.contains(&sub(g, &a))).min().cloned().unwrap_or(a);
            reps.push(class_min);
        }
        reps.sort();
        reps.dedup();
        self.atom_grades = reps.iter().map(|a| self.grade(a).expect("atom lies in the lattice")).collect();
        self.atoms = reps;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn lattice(&self) -> &Lattice<i64> {
        &self.lattice
    }

    pub fn units(&self) -> &Lattice<i64> {
        &self.units
    }

    pub fn grading(&self) -> &[i64] {
        &self.grading
    }

    pub fn atoms(&self) -> &[Vec<i64>] {
        &self.atoms
    }

    pub fn atom_grades(&self) -> &[i64] {
        &self.atom_grades
    }

    pub fn is_group(&self) -> bool {
        self.grades.iter().all(|&g| g == 0)
    }

    pub fn is_reduced(&self) -> bool {
        self.units.is_zero()
    }

    /// Grade of a lattice vector; `None` when `v` is outside `gp(M)`.
    pub fn grade(&self, v: &[i64]) -> Option<i64> {
        self.lattice.coordinates(v).map(|c| dot(&self.grading, &c))
    }

    pub fn contains(&self, v: &[i64], max_nodes: u64) -> Tri {
        self.contains_with(v, &mut Meter::with_limit(max_nodes))
    }

    pub(crate) fn contains_with(&self, v: &[i64], meter: &mut Meter) -> Tri {
        let Some(grade) = self.grade(v) else { return Tri::No };
        if grade < 0 {
            return Tri::No;
        }
        let mut items: Vec<(Vec<i64>, i64)> =
            self.generators.iter().zip(&self.grades).filter(|(_, &g)| g > 0).map(|(v, &g)| (v.clone(), g)).collect();
        items.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let search =
            GradedSearch { items: &items, units: &self.units, exact_length: None, max_length: None, max_results: 1 };
        let out = search.run(v, grade, meter);
        if !out.solutions.is_empty() {
            Tri::Yes
        } else if out.complete {
            Tri::No
        } else {
            Tri::Unknown
        }
    }

    pub fn is_unit(&self, v: &[i64]) -> bool {
        self.units.contains(v)
    }

    /// All coefficient vectors `x` over the atoms with `sum x_i a_i = v` modulo units.
    pub(crate) fn factor(
        &self,
        v: &[i64],
        exact_length: Option<u64>,
        max_length: Option<u64>,
        max_results: usize,
        meter: &mut Meter,
    ) -> SearchOutcome {
        let Some(grade) = self.grade(v) else {
            return SearchOutcome { solutions: Vec::new(), complete: true };
        };
        if grade < 0 {
            return SearchOutcome { solutions: Vec::new(), complete: true };
        }
        let items: Vec<(Vec<i64>, i64)> = self.atoms.iter().cloned().zip(self.atom_grades.iter().copied()).collect();
        let search = GradedSearch { items: &items, units: &self.units, exact_length, max_length, max_results };
        search.run(v, grade, meter)
    }
}

/// A point in the relative interior of the dual cone of `coords` (which span
/// `Z^rank`): the sum of every valid facet-normal candidate, scaled to be
/// primitive. Zero exactly when the cone is the whole space.
fn relative_interior_functional(coords: &[Vec<i64>], rank: usize) -> Vec<i64> {
    if rank == 0 {
        return Vec::new();
    }
    let mut distinct: Vec<Vec<i64>> = coords.to_vec();
    distinct.sort();
    distinct.dedup();
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    if rank == 1 {
        candidates.push(vec![1]);
        candidates.push(vec![-1]);
    } else {
        for subset in combinations(distinct.len(), rank - 1) {
            let vectors: Vec<Vec<i64>> = subset.iter().map(|&i| distinct[i].clone()).collect();
            let n = normal_vector(&vectors, rank);
            if n.iter().all(|&x| x == 0) {
                continue;
            }
            let g = gcd_all(n.iter().copied());
            let n: Vec<i64> = n.iter().map(|x| x / g).collect();
            let neg: Vec<i64> = n.iter().map(|x| -x).collect();
            candidates.push(n);
            candidates.push(neg);
        }
        candidates.sort();
        candidates.dedup();
    }
    let mut w = vec![0i64; rank];
    for c in candidates {
        if distinct.iter().all(|v| dot(&c, v) >= 0) {
            for (x, y) in w.iter_mut().zip(&c) {
                *x += y;
            }
        }
    }
    let g = gcd_all(w.iter().copied());
    if g > 1 {
        for x in w.iter_mut() {
            *x /= g;
        }
    }
    w
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    pub solutions: Vec<Vec<u64>>,
    /// True when the search space was fully explored (not cut by the node
    /// cap or the result cap).
    pub complete: bool,
}

/// Backtracking over nonnegative coefficient vectors for `items` whose
/// weighted grade sum equals the target grade; a leaf is a solution when the
/// residual lies in `units`.
pub(crate) struct GradedSearch<'a> {
    pub items: &'a [(Vec<i64>, i64)],
    pub units: &'a Lattice<i64>,
    pub exact_length: Option<u64>,
    pub max_length: Option<u64>,
    pub max_results: usize,
}

impl GradedSearch<'_> {
    pub(crate) fn run(&self, target: &[i64], grade: i64, meter: &mut Meter) -> SearchOutcome {
        let mut state = SearchState { coeffs: vec![0; self.items.len()], solutions: Vec::new(), aborted: false };
        let length_cap = match (self.exact_length, self.max_length) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.dfs(0, target.to_vec(), grade, 0, length_cap, meter, &mut state);
        let complete = !state.aborted;
        SearchOutcome { solutions: state.solutions, complete }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        i: usize,
        residual: Vec<i64>,
        grade: i64,
        length: u64,
        length_cap: Option<u64>,
        meter: &mut Meter,
        st: &mut SearchState,
    ) {
        if st.aborted {
            return;
        }
        if !meter.tick() {
            st.aborted = true;
            return;
        }
        if grade == 0 || i == self.items.len() {
            if grade == 0 && self.exact_length.is_none_or(|l| l == length) && self.units.contains(&residual) {
                if st.solutions.len() >= self.max_results {
                    st.aborted = true;
                    return;
                }
                st.solutions.push(st.coeffs.clone());
            }
            return;
        }
        let (item, g) = &self.items[i];
        let mut max_c = (grade / g) as u64;
        if let Some(cap) = length_cap {
            max_c = max_c.min(cap.saturating_sub(length));
        }
        let last = i + 1 == self.items.len();
        let range: Box<dyn Iterator<Item = u64>> = if last {
            if grade % g != 0 || (grade / g) as u64 > max_c {
                return;
            }
            Box::new(std::iter::once((grade / g) as u64))
        } else {
            Box::new(0..=max_c)
        };
        for c in range {
            let ci = c as i64;
            let next: Vec<i64> = residual.iter().zip(item).map(|(r, a)| r - ci * a).collect();
            st.coeffs[i] = c;
            self.dfs(i + 1, next, grade - ci * g, length + c, length_cap, meter, st);
            st.coeffs[i] = 0;
            if st.aborted {
                return;
            }
        }
    }
}

struct SearchState {
    coeffs: Vec<u64>,
    solutions: Vec<Vec<u64>>,
    aborted: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numerical(gens: &[i64]) -> FgPresentation {
        let g: Vec<Vec<i64>> = gens.iter().map(|&x| vec![x]).collect();
        FgPresentation::new(1, &g).unwrap()
    }

    #[test]
    fn numerical_monoid_membership() {
        let p = numerical(&[2, 3]);
        assert_eq!(p.contains(&[1], 1000), Tri::No);
        assert_eq!(p.contains(&[0], 1000), Tri::Yes);
        for n in 2..40 {
            assert_eq!(p.contains(&[n], 1000), Tri::Yes, "{n}");
        }
        assert_eq!(p.contains(&[-2], 1000), Tri::No);
        assert!(p.is_reduced());
        assert_eq!(p.atoms(), &[vec![2], vec![3]]);
    }

    #[test]
    fn redundant_generator_is_not_an_atom() {
        let p = numerical(&[3, 4, 5, 7, 8]);
        assert_eq!(p.atoms(), &[vec![3], vec![4], vec![5]]);
    }

    #[test]
    fn units_get_grade_zero() {
        // Z x N0 as a finitely generated monoid
        let p = FgPresentation::new(2, &[vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap();
        assert!(!p.is_reduced());
        assert_eq!(p.units().basis(), &[vec![1, 0]]);
        assert_eq!(p.atoms(), &[vec![0, 1]]);
        assert_eq!(p.contains(&[-7, 3], 1000), Tri::Yes);
        assert_eq!(p.contains(&[4, -1], 1000), Tri::No);
    }

    #[test]
    fn group_when_cone_is_everything() {
        let p = FgPresentation::new(1, &[vec![2], vec![-3]]).unwrap();
        assert!(p.is_group());
        assert_eq!(p.contains(&[1], 1000), Tri::Yes);
        assert!(p.atoms().is_empty());
    }

    #[test]
    fn skewed_cone_gets_positive_grading() {
        let p = FgPresentation::new(2, &[vec![1, 0], vec![-10, 1]]).unwrap();
        assert!(p.is_reduced());
        assert_eq!(p.contains(&[-9, 1], 1000), Tri::Yes);
        assert_eq!(p.contains(&[-11, 1], 1000), Tri::No);
    }

    #[test]
    fn node_cap_gives_unknown() {
        let p = numerical(&[7, 11, 13]);
        assert_eq!(p.contains(&[1000], 2), Tri::Unknown);
        assert_eq!(p.contains(&[1000], 1_000_000), Tri::Yes);
    }
}
