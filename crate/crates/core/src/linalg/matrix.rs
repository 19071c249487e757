use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational; always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}

pub fn int(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}

/// Formats as `p/q` even when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |e: &dyn fmt::Display| Error::Format(format!("bad rational {s:?}: {e}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|e| bad(&e))?;
            let q: BigInt = q.trim().parse().map_err(|e| bad(&e))?;
            if q.is_zero() {
                return Err(bad(&"zero denominator"));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(int(s.parse::<BigInt>().map_err(|e| bad(&e))?)),
    }
}

/// Serde helpers writing rationals as `p/q` strings.
pub mod serde_rational {
    use super::{format_rational, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn serialize_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }
}

/// Dense square matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        RationalMatrix {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    /// The all-ones matrix `J`.
    pub fn ones(dim: usize) -> Self {
        RationalMatrix {
            dim,
            entries: vec![Rational::one(); dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        RationalMatrix { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(r) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::Dimension(format!(
                "row {r} has {} entries in a {dim}x{dim} matrix",
                rows[r].len()
            )));
        }
        Ok(RationalMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.dim.max(1)).take(self.dim)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        RationalMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.dim);
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `trace(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &RationalMatrix) -> Rational {
        assert_eq!(self.dim, other.dim);
        let mut acc = Rational::zero();
        for i in 0..self.dim {
            for k in 0..self.dim {
                let (a, b) = (self.get(i, k), other.get(k, i));
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Principal submatrix with row and column `index` removed.
    pub fn delete_row_col(&self, index: usize) -> Result<Self> {
        if index >= self.dim {
            return Err(Error::IndexOutOfRange {
                index,
                dim: self.dim,
            });
        }
        if self.dim < 2 {
            return Err(Error::Dimension("cannot delete from a 1x1 matrix".into()));
        }
        Ok(self.minor_matrix(index, index))
    }

    /// Submatrix with row `row` and column `col` removed.
    fn minor_matrix(&self, row: usize, col: usize) -> Self {
        let keep = |skip: usize| (0..self.dim).filter(move |&k| k != skip);
        let entries = keep(row)
            .flat_map(|i| keep(col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        RationalMatrix {
            dim: self.dim - 1,
            entries,
        }
    }

    /// Exact determinant.
    ///
    /// Clears denominators with their lcm `L`, runs fraction-free Bareiss
    /// elimination on the integer matrix, and divides by `L^dim`.
    pub fn det_exact(&self) -> Rational {
        let lcm = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let scaled: Vec<Vec<BigInt>> = self
            .rows()
            .map(|row| {
                row.iter()
                    .map(|e| e.numer() * (&lcm / e.denom()))
                    .collect()
            })
            .collect();
        let det = bareiss_determinant(scaled);
        Rational::new(det, num_traits::pow(lcm, self.dim))
    }

    /// Transpose of the cofactor matrix, so that `A · adj(A) = det(A) · I`.
    pub fn adjugate(&self) -> Result<Self> {
        if self.dim < 2 {
            return Err(Error::Dimension(format!(
                "adjugate needs dimension at least 2, got {}",
                self.dim
            )));
        }
        Ok(Self::from_fn(self.dim, |i, j| {
            let cofactor = self.minor_matrix(j, i).det_exact();
            if (i + j) % 2 == 0 {
                cofactor
            } else {
                -cofactor
            }
        }))
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| Error::Singular(format!("no pivot in column {col}")))?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a.get(col, col).recip();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                a.sub_row_multiple(r, col, &f);
                inv.sub_row_multiple(r, col, &f);
            }
        }
        Ok(inv)
    }

    /// Schur complement `U − V Z⁻¹ W` of the trailing block `Z` (rows and
    /// columns `split..dim`).
    pub fn schur_complement(&self, split: usize) -> Result<Self> {
        let n = self.dim;
        if split == 0 || split >= n {
            return Err(Error::Dimension(format!(
                "split {split} must lie strictly inside 0..{n}"
            )));
        }
        let r = n - split;
        let z = Self::from_fn(r, |p, q| self.get(split + p, split + q).clone());
        let z_inv = z.inverse()?;
        // V Z⁻¹, an split × r block
        let mut vz = vec![Rational::zero(); split * r];
        for i in 0..split {
            for p in 0..r {
                let v = self.get(i, split + p);
                if v.is_zero() {
                    continue;
                }
                for q in 0..r {
                    let zi = z_inv.get(p, q);
                    if !zi.is_zero() {
                        vz[i * r + q] += v * zi;
                    }
                }
            }
        }
        Ok(Self::from_fn(split, |i, k| {
            let mut acc = self.get(i, k).clone();
            for q in 0..r {
                let (a, w) = (&vz[i * r + q], self.get(split + q, k));
                if !a.is_zero() && !w.is_zero() {
                    acc -= a * w;
                }
            }
            acc
        }))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        self.rows()
            .map(|row| row.iter().map(|e| e.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.dim {
            self.entries.swap(a * self.dim + j, b * self.dim + j);
        }
    }

    fn scale_row(&mut self, r: usize, f: &Rational) {
        for e in &mut self.entries[r * self.dim..(r + 1) * self.dim] {
            *e *= f;
        }
    }

    /// row[target] -= f · row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, f: &Rational) {
        for j in 0..self.dim {
            let s = &self.entries[source * self.dim + j];
            if !s.is_zero() {
                let d = f * s;
                self.entries[target * self.dim + j] -= d;
            }
        }
    }
}

/// Fraction-free determinant of an integer matrix.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..n {
                let num = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = if prev.is_one() { num } else { num / &prev };
            }
            row[k] = BigInt::zero();
        }
        prev = pivot_row[k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

impl fmt::Display for RationalMatrix {
    /// One row per line, entries as `p/q` separated by tabs.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(f, "{}", line.join("\t"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix({}x{})", self.dim, self.dim)?;
        fmt::Display::fmt(self, f)
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;

    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim);
        RationalMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;

    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim);
        RationalMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;

    fn neg(self) -> RationalMatrix {
        RationalMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = RationalMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

/// Nonnegative integer value of an exact rational, if it is one.
pub fn as_nonnegative_integer(r: &Rational) -> Option<num_bigint::BigUint> {
    (r.is_integer() && !r.is_negative()).then(|| r.to_integer().to_biguint().expect("nonnegative"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Cofactor expansion along the first row; independent of Bareiss.
    fn det_by_expansion(m: &RationalMatrix) -> Rational {
        if m.dim() == 0 {
            return Rational::one();
        }
        if m.dim() == 1 {
            return m.get(0, 0).clone();
        }
        (0..m.dim())
            .map(|j| {
                let term = m.get(0, j) * det_by_expansion(&m.minor_matrix(0, j));
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(RationalMatrix::identity(5).det_exact(), int(1));
        let m = RationalMatrix::from_integers(&[[1, 2], [3, 4]]).unwrap();
        assert_eq!(m.det_exact(), int(-2));
        assert_eq!(RationalMatrix::zeros(0).det_exact(), int(1));
        // needs a row swap
        let m = RationalMatrix::from_integers(&[[0, 1, 0], [1, 0, 0], [0, 0, 3]]).unwrap();
        assert_eq!(m.det_exact(), int(-3));
        let half = RationalMatrix::identity(3).scale(&rational(1, 2));
        assert_eq!(half.det_exact(), rational(1, 8));
    }

    #[test]
    fn deletion() {
        let id = RationalMatrix::identity(2);
        assert_eq!(id.delete_row_col(0).unwrap(), RationalMatrix::identity(1));
        assert!(matches!(
            id.delete_row_col(2),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        ));
        assert!(RationalMatrix::identity(1).delete_row_col(0).is_err());
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(
            RationalMatrix::identity(3).adjugate().unwrap(),
            RationalMatrix::identity(3)
        );
        let m = RationalMatrix::from_integers(&[[1, 2], [3, 4]]).unwrap();
        assert_eq!(
            m.adjugate().unwrap(),
            RationalMatrix::from_integers(&[[4, -2], [-3, 1]]).unwrap()
        );
        assert!(RationalMatrix::identity(1).adjugate().is_err());
    }

    #[test]
    fn inverse_and_singular() {
        let m = RationalMatrix::from_integers(&[[2, 1], [1, 1]]).unwrap();
        assert_eq!(&m * &m.inverse().unwrap(), RationalMatrix::identity(2));
        let s = RationalMatrix::from_integers(&[[1, 2], [2, 4]]).unwrap();
        assert!(matches!(s.inverse(), Err(Error::Singular(_))));
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&rational(64, 9)), "64/9");
        assert_eq!(format_rational(&int(12)), "12/1");
        assert_eq!(format_rational(&rational(3, -6)), "-1/2");
        assert_eq!(parse_rational("6/4").unwrap(), rational(3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
    }

    #[test]
    fn display_dump() {
        let m = RationalMatrix::from_rows(vec![
            vec![rational(1, 2), int(-1)],
            vec![int(0), rational(-3, 4)],
        ])
        .unwrap();
        assert_eq!(m.to_string(), "1/2\t-1/1\n0/1\t-3/4\n");
    }

    fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..=5).prop_flat_map(|n| {
            prop::collection::vec((-6i64..=6, 1i64..=4), n * n).prop_map(move |v| {
                let entries = v.into_iter().map(|(p, q)| rational(p, q)).collect();
                RationalMatrix { dim: n, entries }
            })
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(m in small_matrix()) {
            prop_assert_eq!(m.det_exact(), det_by_expansion(&m));
        }

        #[test]
        fn adjugate_identity(m in small_matrix().prop_filter("dim >= 2", |m| m.dim() >= 2)) {
            let adj = m.adjugate().unwrap();
            let d = m.det_exact();
            prop_assert_eq!(&m * &adj, RationalMatrix::identity(m.dim()).scale(&d));
        }

        #[test]
        fn block_determinant_formula(m in small_matrix().prop_filter("dim >= 2", |m| m.dim() >= 2), split in 1usize..5) {
            let split = split.min(m.dim() - 1);
            let r = m.dim() - split;
            let z = RationalMatrix::from_fn(r, |p, q| m.get(split + p, split + q).clone());
            if !z.det_exact().is_zero() {
                let s = m.schur_complement(split).unwrap();
                prop_assert_eq!(m.det_exact(), z.det_exact() * s.det_exact());
            }
        }
    }
}
