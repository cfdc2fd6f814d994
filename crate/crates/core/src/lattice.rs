//! Integer lattices in Hermite normal form, plus the small amount of exact
//! linear algebra the monoid code needs (determinants, normals to
//! hyperplanes, rational null spaces).

use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

/// A sublattice of `Z^dim`, stored by its row-style Hermite normal form.
///
/// The basis is echelon with positive pivots, and every entry above a pivot
/// lies in `[0, pivot)`, so two lattices are equal iff their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice<T: Scalar> {
    dim: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Scalar> Lattice<T> {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim).map(|i| (0..dim).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
        Lattice { dim, basis }
    }

    /// Lattice generated by `generators`; every generator must have length `dim`.
    pub fn from_generators(dim: usize, generators: &[Vec<T>]) -> Self {
        debug_assert!(generators.iter().all(|g| g.len() == dim));
        Lattice { dim, basis: hermite_rows(generators.to_vec(), dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Integer coefficients `c` with `v = sum c_k * basis_k`, if `v` is in the lattice.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        if v.len() != self.dim {
            return None;
        }
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let p = pivot(row).expect("basis rows are nonzero");
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, b) in rest.iter_mut().zip(row) {
                    *x = x.clone() - q.clone() * b.clone();
                }
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    /// Canonical representative of `v` modulo the lattice: entries at pivot
    /// columns are reduced into `[0, pivot)`.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        let mut rest = v.to_vec();
        for row in &self.basis {
            let p = pivot(row).expect("basis rows are nonzero");
            let q = rest[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (x, b) in rest.iter_mut().zip(row) {
                    *x = x.clone() - q.clone() * b.clone();
                }
            }
        }
        rest
    }

    /// Lattice spanned by `self` together with `other`.
    pub fn join(&self, other: &Lattice<T>) -> Lattice<T> {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Lattice::from_generators(self.dim, &rows)
    }
}

fn pivot<T: Scalar>(row: &[T]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
pub fn hermite_rows<T: Scalar>(rows: Vec<Vec<T>>, dim: usize) -> Vec<Vec<T>> {
    let mut m: Vec<Vec<T>> = rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut r = 0;
    for col in 0..dim {
        if r >= m.len() {
            break;
        }
        loop {
            let best =
                (r..m.len()).filter(|&i| !m[i][col].is_zero()).min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let Some(best) = best else { break };
            m.swap(r, best);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[r][col]);
                let (head, tail) = m.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                    *x = x.clone() - q.clone() * y.clone();
                }
                if !tail[0][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][col].is_zero() {
            continue;
        }
        if m[r][col].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = m[i][col].div_floor(&m[r][col]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = m.split_at_mut(r);
            for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                *x = x.clone() - q.clone() * y.clone();
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant<T: Scalar>(matrix: &[Vec<T>]) -> T {
    let n = matrix.len();
    if n == 0 {
        return T::one();
    }
    let mut a = matrix.to_vec();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return T::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Normal vector to the hyperplane spanned by `vectors` (`n - 1` vectors in
/// `Z^n`): the generalized cross product. Zero when the vectors are dependent.
pub fn normal_vector<T: Scalar>(vectors: &[Vec<T>], n: usize) -> Vec<T> {
    debug_assert_eq!(vectors.len() + 1, n);
    (0..n)
        .map(|skip| {
            let minor: Vec<Vec<T>> = vectors
                .iter()
                .map(|v| v.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = determinant(&minor);
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Basis of the rational null space `{ z : A z = 0 }` of a `rows x cols` matrix.
pub fn rational_kernel(a: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rational::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (row_r, row_i) = if i < r {
                    let (head, tail) = m.split_at_mut(r);
                    (&tail[0], &mut head[i])
                } else {
                    let (head, tail) = m.split_at_mut(i);
                    (&head[r], &mut tail[0])
                };
                for (x, y) in row_i.iter_mut().zip(row_r) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut z = vec![Rational::zero(); cols];
            z[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                z[pc] = -m[row][free].clone();
            }
            z
        })
        .collect()
}

/// Rank over the rationals of an integer matrix given by rows.
pub fn rank<T: Scalar>(rows: &[Vec<T>], dim: usize) -> usize {
    hermite_rows(rows.to_vec(), dim).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn hnf_of_two_and_three_is_unit_lattice() {
        let l = Lattice::from_generators(1, &[vec![2i64], vec![3]]);
        assert_eq!(l.basis(), &[vec![1]]);
        let l = Lattice::from_generators(1, &[vec![4i64], vec![6]]);
        assert_eq!(l.basis(), &[vec![2]]);
    }

    #[test]
    fn corner_differences_span_z2() {
        let l = Lattice::from_generators(2, &[vec![1i64, 1], vec![1, 2], vec![2, 1]]);
        assert_eq!(l, Lattice::full(2));
    }

    #[test]
    fn hnf_is_canonical_across_generating_sets() {
        let a = Lattice::from_generators(2, &[vec![2i64, 0], vec![1, 3]]);
        let b = Lattice::from_generators(2, &[vec![1i64, 3], vec![3, 3], vec![-1, -3]]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[vec![1, 3], vec![0, 6]]);
    }

    #[test]
    fn coordinates_reconstruct_vector() {
        let l = Lattice::from_generators(3, &[vec![1i64, 2, 0], vec![0, 3, 1], vec![2, 1, -1]]);
        let v = vec![3i64, 9, 1];
        let c = l.coordinates(&v).expect("member");
        let mut back = vec![0i64; 3];
        for (k, row) in l.basis().iter().enumerate() {
            for j in 0..3 {
                back[j] += c[k] * row[j];
            }
        }
        assert_eq!(back, v);
        assert!(!l.contains(&[0, 0, 1]) || l.rank() == 3);
    }

    #[test]
    fn generic_over_bigint() {
        let gens = vec![vec![BigInt::from(6), BigInt::from(0)], vec![BigInt::from(4), BigInt::from(2)]];
        let l = Lattice::from_generators(2, &gens);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&[BigInt::from(2), BigInt::from(-2)]));
        assert!(!l.contains(&[BigInt::from(1), BigInt::from(0)]));
    }

    #[test]
    fn determinant_and_normal() {
        assert_eq!(determinant(&[vec![2i64, 1], vec![1, 3]]), 5);
        assert_eq!(determinant(&[vec![0i64, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]), -2);
        let n = normal_vector(&[vec![1i64, 0, 0], vec![0, 1, 0]], 3);
        assert_eq!(n.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![0, 0, 1]);
        let n = normal_vector(&[vec![1i64, 2]], 2);
        assert_eq!(n[0] + n[1] * 2, 0);
    }

    #[test]
    fn kernel_of_three_four_five_with_length_row() {
        let a = vec![
            vec![Rational::from_integer(3.into()), Rational::from_integer(4.into()), Rational::from_integer(5.into())],
            vec![Rational::one(), Rational::one(), Rational::one()],
        ];
        let k = rational_kernel(&a, 3);
        assert_eq!(k.len(), 1);
        let z = &k[0];
        assert_eq!(z[0], z[2]);
        assert_eq!(z[1], -z[0].clone() * Rational::from_integer(2.into()));
    }

    #[test]
    fn reduce_is_canonical_mod_lattice() {
        let l = Lattice::from_generators(2, &[vec![1i64, 0]]);
        assert_eq!(l.reduce(&[7, 3]), vec![0, 3]);
        assert_eq!(l.reduce(&[-4, 3]), vec![0, 3]);
    }
}
