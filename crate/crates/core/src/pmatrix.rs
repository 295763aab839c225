//! Square matrices over truncated Z_p and the congruence filtration.
//!
//! The valuation `omega(g) = min_{i,j} v_p((g - 1)_{ij})` measures how deep a
//! matrix sits in the principal congruence filtration: `omega(g) >= i` exactly
//! when `g = 1 mod p^i`. For odd p and `g` in the first congruence subgroup,
//! omega satisfies
//!
//! * `omega(g^-1 h) >= min(omega(g), omega(h))`
//! * `omega([g, h]) >= omega(g) + omega(h)`
//! * `omega(g^p) = omega(g) + 1`
//!
//! where everything is truncated at the working precision K (levels saturate
//! at K instead of growing past it).

use crate::padic::{PadicError, PadicInt, ValLevel};
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use thiserror::Error;

/// Valuation of `g - 1`; same saturation semantics as [`ValLevel`].
pub type OmegaLevel = ValLevel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not invertible: its determinant is divisible by p")]
    NonInvertible,
    #[error("matrix sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("a {size}x{size} matrix needs {expected} entries, got {found}")]
    BadShape {
        size: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrices must be square and nonempty")]
    EmptyMatrix,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// A square matrix with entries in `Z_p` truncated at `p^K`. All entries
/// share one context `(p, K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMatrix {
    prime: u64,
    precision: u32,
    size: usize,
    entries: Vec<PadicInt>,
}

impl PMatrix {
    /// Builds a matrix from row-major entries; all must share `(p, K)`.
    pub fn new(
        prime: u64,
        precision: u32,
        size: usize,
        entries: Vec<PadicInt>,
    ) -> Result<Self, MatrixError> {
        if size == 0 {
            return Err(MatrixError::EmptyMatrix);
        }
        if entries.len() != size * size {
            return Err(MatrixError::BadShape {
                size,
                expected: size * size,
                found: entries.len(),
            });
        }
        let probe = PadicInt::zero(prime, precision)?;
        for e in &entries {
            if e.prime() != prime || e.precision() != precision {
                probe.add(e)?;
            }
        }
        Ok(PMatrix {
            prime,
            precision,
            size,
            entries,
        })
    }

    /// Convenience constructor from integer rows; negative values are reduced
    /// into `[0, p^K)`.
    pub fn from_i64_rows(
        prime: u64,
        precision: u32,
        rows: &[Vec<i64>],
    ) -> Result<Self, MatrixError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(MatrixError::BadShape {
                    size,
                    expected: size * size,
                    found: row.len() * size,
                });
            }
            for &v in row {
                entries.push(PadicInt::from_i64(prime, precision, v)?);
            }
        }
        Self::new(prime, precision, size, entries)
    }

    pub fn identity(prime: u64, precision: u32, size: usize) -> Result<Self, MatrixError> {
        if size == 0 {
            return Err(MatrixError::EmptyMatrix);
        }
        let zero = PadicInt::zero(prime, precision)?;
        let one = PadicInt::one(prime, precision)?;
        let mut entries = vec![zero; size * size];
        for i in 0..size {
            entries[i * size + i] = one.clone();
        }
        Self::new(prime, precision, size, entries)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, row: usize, col: usize) -> &PadicInt {
        &self.entries[row * self.size + col]
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.prime, self.precision, self.size).expect("valid context")
    }

    fn modulus(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.precision)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), MatrixError> {
        if self.size != other.size {
            return Err(MatrixError::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        // Context mismatches surface as PadicError from entry arithmetic.
        self.entries[0].add(&other.entries[0])?;
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_compatible(other)?;
        let m = self.modulus();
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigUint::zero();
                for k in 0..n {
                    acc += self.entry(i, k).residue() * other.entry(k, j).residue();
                }
                entries.push(
                    PadicInt::new(self.prime, self.precision, acc % &m).expect("valid context"),
                );
            }
        }
        Self::new(self.prime, self.precision, n, entries)
    }

    /// Determinant, computed exactly on integer lifts by fraction-free
    /// elimination and reduced back modulo `p^K`.
    pub fn det(&self) -> PadicInt {
        let n = self.size;
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigInt::from_biguint(Sign::Plus, self.entry(i, j).residue().clone()))
                    .collect()
            })
            .collect();
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return PadicInt::zero(self.prime, self.precision).expect("valid"),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let mut d = a[n - 1][n - 1].clone();
        if sign < 0 {
            d = -d;
        }
        let m = BigInt::from_biguint(Sign::Plus, self.modulus());
        let r = ((d % &m) + &m) % &m;
        PadicInt::new(
            self.prime,
            self.precision,
            r.to_biguint().expect("non-negative"),
        )
        .expect("valid context")
    }

    pub fn is_invertible(&self) -> bool {
        self.det().is_unit()
    }

    /// Inverse modulo `p^K`. Defined exactly when the determinant is a unit.
    ///
    /// Small sizes go through the adjugate; larger ones use Gauss-Jordan
    /// elimination, where invertibility guarantees a unit pivot in every
    /// column.
    pub fn inv(&self) -> Result<Self, MatrixError> {
        let det = self.det();
        if !det.is_unit() {
            return Err(MatrixError::NonInvertible);
        }
        if self.size <= 3 {
            self.inv_adjugate(&det)
        } else {
            self.inv_gauss_jordan()
        }
    }

    fn lift(&self, row: usize, col: usize) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.entry(row, col).residue().clone())
    }

    fn inv_adjugate(&self, det: &PadicInt) -> Result<Self, MatrixError> {
        let det_inv = det.inv()?;
        let n = self.size;
        let m = BigInt::from_biguint(Sign::Plus, self.modulus());
        let cof = |i: usize, j: usize| -> BigInt {
            // Cofactor C_ij on integer lifts.
            let minor: Vec<BigInt> = (0..n)
                .filter(|&r| r != i)
                .flat_map(|r| (0..n).filter(|&c| c != j).map(move |c| (r, c)))
                .map(|(r, c)| self.lift(r, c))
                .collect();
            let d = match n {
                1 => BigInt::one(),
                2 => minor[0].clone(),
                3 => &minor[0] * &minor[3] - &minor[1] * &minor[2],
                _ => unreachable!("adjugate path is limited to size <= 3"),
            };
            if (i + j).is_multiple_of(2) {
                d
            } else {
                -d
            }
        };
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // adj(A)_ij = C_ji
                let v = cof(j, i);
                let r = ((v % &m) + &m) % &m;
                let e = PadicInt::new(
                    self.prime,
                    self.precision,
                    r.to_biguint().expect("non-negative"),
                )
                .expect("valid context");
                entries.push(e.mul(&det_inv).expect("same context"));
            }
        }
        Self::new(self.prime, self.precision, n, entries)
    }

    fn inv_gauss_jordan(&self) -> Result<Self, MatrixError> {
        let n = self.size;
        let m = self.modulus();
        let p = BigUint::from(self.prime);
        let mut a: Vec<Vec<BigUint>> = (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).residue().clone()).collect())
            .collect();
        let mut b: Vec<Vec<BigUint>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigUint::one()
                        } else {
                            BigUint::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let sub_mod = |x: &BigUint, y: &BigUint| -> BigUint { ((&m + x) - (y % &m)) % &m };
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !(&a[r][col] % &p).is_zero())
                .ok_or(MatrixError::NonInvertible)?;
            a.swap(col, pivot_row);
            b.swap(col, pivot_row);
            let piv_inv = PadicInt::new(self.prime, self.precision, a[col][col].clone())
                .expect("valid context")
                .inv()
                .expect("pivot is a unit")
                .residue()
                .clone();
            for j in 0..n {
                a[col][j] = &a[col][j] * &piv_inv % &m;
                b[col][j] = &b[col][j] * &piv_inv % &m;
            }
            for row in 0..n {
                if row == col || a[row][col].is_zero() {
                    continue;
                }
                let factor = a[row][col].clone();
                for j in 0..n {
                    let ta = &factor * &a[col][j] % &m;
                    let tb = &factor * &b[col][j] % &m;
                    a[row][j] = sub_mod(&a[row][j], &ta);
                    b[row][j] = sub_mod(&b[row][j], &tb);
                }
            }
        }
        let entries = b
            .into_iter()
            .flatten()
            .map(|r| PadicInt::new(self.prime, self.precision, r).expect("valid context"))
            .collect();
        Self::new(self.prime, self.precision, n, entries)
    }

    /// `self^exponent` by binary powering; the exponent is an arbitrary
    /// non-negative integer.
    pub fn pow(&self, exponent: &BigUint) -> Self {
        let mut result =
            Self::identity(self.prime, self.precision, self.size).expect("valid context");
        let bits = exponent.bits();
        for idx in (0..bits).rev() {
            result = result.mul(&result).expect("same context");
            if exponent.bit(idx) {
                result = result.mul(self).expect("same context");
            }
        }
        result
    }

    pub fn pow_u64(&self, exponent: u64) -> Self {
        self.pow(&BigUint::from(exponent))
    }

    /// `[g, h] = g^-1 h^-1 g h`; with this convention
    /// `[g^-1, h^-1] = g h g^-1 h^-1`.
    pub fn commutator(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_compatible(other)?;
        let gi = self.inv()?;
        let hi = other.inv()?;
        gi.mul(&hi)?.mul(self)?.mul(other)
    }

    /// Minimum entry valuation of `g - 1`; saturated exactly when `g = 1`
    /// to full precision.
    pub fn omega(&self) -> OmegaLevel {
        let one = PadicInt::one(self.prime, self.precision).expect("valid context");
        let mut best: Option<u32> = None;
        for i in 0..self.size {
            for j in 0..self.size {
                let diff = if i == j {
                    self.entry(i, j).sub(&one).expect("same context")
                } else {
                    self.entry(i, j).clone()
                };
                let v = diff.valuation();
                if !v.is_saturated() {
                    best = Some(best.map_or(v.level(), |b| b.min(v.level())));
                }
            }
        }
        match best {
            Some(level) => ValLevel::finite(level),
            None => ValLevel::saturated(self.precision),
        }
    }

    /// Whether `g = 1 mod p^level`, and additionally `det(g) = 1 mod p^K`
    /// when `special` is set. Requires `1 <= level <= K`.
    pub fn congruence_level_test(&self, level: u32, special: bool) -> bool {
        assert!(
            level >= 1 && level <= self.precision,
            "congruence level {level} outside [1, {}]",
            self.precision
        );
        if self.omega().level() < level {
            return false;
        }
        !special || self.det().is_one()
    }
}

/// Upper bound `p^n (p^{nd} - 1)` for the order of a torsion element of
/// `GL_n` over a complete local domain of residue characteristic p whose
/// fraction field has characteristic p, with `d` the residue degree.
pub fn torsion_order_bound_char_p(p: u64, n: u32, d: u32) -> BigUint {
    assert!(crate::padic::is_prime_u64(p), "{p} is not prime");
    assert!(
        n >= 1 && d >= 1,
        "matrix size and residue degree must be >= 1"
    );
    let base = BigUint::from(p);
    base.pow(n) * (base.pow(n * d) - BigUint::one())
}
