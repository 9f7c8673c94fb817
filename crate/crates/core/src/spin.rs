//! Small dense complex matrices: Pauli algebra, Hermitian exponentials and
//! closed-form 2×2 / 3×3 eigensolvers.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Numerical tolerances shared by the small-matrix routines.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Largest accepted |M − M†| entry, relative to max(1, ‖M‖).
    pub hermitian_input: f64,
    /// Below this (relative) Pauli-vector length a 2×2 matrix counts as scalar.
    pub degenerate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian_input: 1e-10,
            degenerate: 1e-300,
        }
    }
}

/// Complex 2×2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinMatrix2(pub [[C64; 2]; 2]);

/// Coefficients of M = a0·𝟙 + ax·σx + ay·σy + az·σz.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliVector {
    pub a0: C64,
    pub ax: C64,
    pub ay: C64,
    pub az: C64,
}

impl PauliVector {
    pub fn real(a0: f64, a: [f64; 3]) -> Self {
        Self {
            a0: C64::new(a0, 0.0),
            ax: C64::new(a[0], 0.0),
            ay: C64::new(a[1], 0.0),
            az: C64::new(a[2], 0.0),
        }
    }

    /// Largest imaginary part among the four components.
    pub fn imag_defect(&self) -> f64 {
        [self.a0, self.ax, self.ay, self.az]
            .iter()
            .map(|c| c.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn real_vector(&self) -> [f64; 3] {
        [self.ax.re, self.ay.re, self.az.re]
    }
}

impl SpinMatrix2 {
    pub const fn new(m: [[C64; 2]; 2]) -> Self {
        Self(m)
    }

    pub const fn zero() -> Self {
        Self([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Self([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn sigma_x() -> Self {
        Self([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn sigma_y() -> Self {
        Self([[ZERO, C64::new(0.0, -1.0)], [I, ZERO]])
    }

    pub const fn sigma_z() -> Self {
        Self([[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]])
    }

    /// Hermitian matrix a0·𝟙 + a·σ with real coefficients.
    pub fn hermitian(a0: f64, a: [f64; 3]) -> Self {
        Self::from_pauli(&PauliVector::real(a0, a))
    }

    pub fn from_pauli(p: &PauliVector) -> Self {
        Self([
            [p.a0 + p.az, p.ax - I * p.ay],
            [p.ax + I * p.ay, p.a0 - p.az],
        ])
    }

    pub fn pauli(&self) -> PauliVector {
        let m = &self.0;
        PauliVector {
            a0: (m[0][0] + m[1][1]) * 0.5,
            az: (m[0][0] - m[1][1]) * 0.5,
            ax: (m[0][1] + m[1][0]) * 0.5,
            ay: (m[1][0] - m[0][1]) * (-0.5 * I),
        }
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry of |M − M†|.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs_entry(&(*self - self.dagger()))
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_entry(&(*self - *other))
    }
}

fn max_abs_entry(m: &SpinMatrix2) -> f64 {
    m.0.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
}

impl Add for SpinMatrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] += rhs.0[r][c];
            }
        }
        out
    }
}

impl Sub for SpinMatrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] -= rhs.0[r][c];
            }
        }
        out
    }
}

impl Mul for SpinMatrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        Self([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

fn check_hermitian2(m: &SpinMatrix2) -> Result<()> {
    let defect = m.hermiticity_defect();
    let scale = m.frobenius_norm().max(1.0);
    if defect > Tolerances::default().hermitian_input * scale {
        return Err(Error::NotHermitian { deviation: defect });
    }
    Ok(())
}

/// exp(i·s·M) for Hermitian M via the Pauli closed form.
pub fn exp_i_hermitian2(m: &SpinMatrix2, s: f64) -> Result<SpinMatrix2> {
    check_hermitian2(m)?;
    let p = m.pauli();
    let a = p.real_vector();
    let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let phase = C64::from_polar(1.0, s * p.a0.re);
    if norm <= Tolerances::default().degenerate {
        return Ok(SpinMatrix2::identity().scale(phase));
    }
    let (sn, cs) = (s * norm).sin_cos();
    let n = [a[0] / norm, a[1] / norm, a[2] / norm];
    let rot = SpinMatrix2::from_pauli(&PauliVector {
        a0: C64::new(cs, 0.0),
        ax: I * (sn * n[0]),
        ay: I * (sn * n[1]),
        az: I * (sn * n[2]),
    });
    Ok(rot.scale(phase))
}

/// Eigen-decomposition of a Hermitian 2×2 matrix.
#[derive(Clone, Copy, Debug)]
pub struct Eig2 {
    /// Ascending eigenvalues.
    pub values: [f64; 2],
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: [[C64; 2]; 2],
}

/// Unit eigenvectors of n̂·σ for eigenvalues (−1, +1), branch chosen for conditioning.
fn pauli_eigenvectors(n: [f64; 3]) -> [[C64; 2]; 2] {
    let [nx, ny, nz] = n;
    let lower = if nz >= 0.0 {
        let norm = (2.0 * (1.0 + nz)).sqrt();
        [C64::new(nx, -ny) / norm, C64::new(-1.0 - nz, 0.0) / norm]
    } else {
        let norm = (2.0 * (1.0 - nz)).sqrt();
        [C64::new(nz - 1.0, 0.0) / norm, C64::new(nx, ny) / norm]
    };
    let upper = if nz >= 0.0 {
        let norm = (2.0 * (1.0 + nz)).sqrt();
        [C64::new(1.0 + nz, 0.0) / norm, C64::new(nx, ny) / norm]
    } else {
        let norm = (2.0 * (1.0 - nz)).sqrt();
        [C64::new(nx, -ny) / norm, C64::new(1.0 - nz, 0.0) / norm]
    };
    [lower, upper]
}

pub fn eig2(m: &SpinMatrix2) -> Result<Eig2> {
    check_hermitian2(m)?;
    let p = m.pauli();
    let a = p.real_vector();
    let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let a0 = p.a0.re;
    if norm <= Tolerances::default().degenerate {
        return Ok(Eig2 {
            values: [a0, a0],
            vectors: [[ONE, ZERO], [ZERO, ONE]],
        });
    }
    let vectors = pauli_eigenvectors([a[0] / norm, a[1] / norm, a[2] / norm]);
    Ok(Eig2 {
        values: [a0 - norm, a0 + norm],
        vectors,
    })
}

/// Complex 3×3 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinMatrix3(pub [[C64; 3]; 3]);

impl SpinMatrix3 {
    pub const fn new(m: [[C64; 3]; 3]) -> Self {
        Self(m)
    }

    pub const fn zero() -> Self {
        Self([[ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([1.0, 1.0, 1.0])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        let mut m = Self::zero();
        for (k, v) in d.iter().enumerate() {
            m.0[k][k] = C64::new(*v, 0.0);
        }
        m
    }

    /// Real symmetric matrix from its rows.
    pub fn real(rows: [[f64; 3]; 3]) -> Self {
        let mut m = Self::zero();
        for r in 0..3 {
            for c in 0..3 {
                m.0[r][c] = C64::new(rows[r][c], 0.0);
            }
        }
        m
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zero();
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] = self.0[c][r].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.dagger()).max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn apply(&self, v: [C64; 3]) -> [C64; 3] {
        let m = &self.0;
        let mut out = [ZERO; 3];
        for r in 0..3 {
            out[r] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2];
        }
        out
    }
}

impl Add for SpinMatrix3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] += rhs.0[r][c];
            }
        }
        out
    }
}

impl Sub for SpinMatrix3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] -= rhs.0[r][c];
            }
        }
        out
    }
}

impl Mul for SpinMatrix3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] = (0..3).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        out
    }
}

fn check_hermitian3(m: &SpinMatrix3) -> Result<()> {
    let defect = m.hermiticity_defect();
    let scale = m.frobenius_norm().max(1.0);
    if defect > Tolerances::default().hermitian_input * scale {
        return Err(Error::NotHermitian { deviation: defect });
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian 3×3 matrix.
#[derive(Clone, Copy, Debug)]
pub struct Eigh3 {
    /// Ascending eigenvalues.
    pub values: [f64; 3],
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: [[C64; 3]; 3],
}

fn cross(a: [C64; 3], b: [C64; 3]) -> [C64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn vnorm(v: &[C64; 3]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn inner(a: &[C64; 3], b: &[C64; 3]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Cardano roots of the characteristic cubic, ascending, plus the sign of the
/// normalized determinant used to pick the best-separated root.
fn cardano_roots(m: &SpinMatrix3) -> Option<([f64; 3], f64)> {
    let a = &m.0;
    let q = m.trace().re / 3.0;
    let p1 = a[0][1].norm_sqr() + a[0][2].norm_sqr() + a[1][2].norm_sqr();
    let p2 = (a[0][0].re - q).powi(2) + (a[1][1].re - q).powi(2) + (a[2][2].re - q).powi(2)
        + 2.0 * p1;
    if p2 == 0.0 {
        return None;
    }
    let p = (p2 / 6.0).sqrt();
    let b = (*m - SpinMatrix3::identity().scale(C64::new(q, 0.0))).scale(C64::new(1.0 / p, 0.0));
    let r = (b.det().re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let mid = 3.0 * q - hi - lo;
    Some(([lo, mid, hi], r))
}

/// Eigenvalues by the Cardano formula, eigenvectors by deflation.
///
/// The best-separated Cardano root is kept; the remaining pair is recomputed
/// from the 2×2 restriction to its orthogonal complement, which keeps
/// near-degenerate pairs accurate to rounding level.
pub fn eigh3(m: &SpinMatrix3) -> Result<Eigh3> {
    check_hermitian3(m)?;
    let Some((roots, r)) = cardano_roots(m) else {
        let q = m.trace().re / 3.0;
        return Ok(Eigh3 {
            values: [q; 3],
            vectors: [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]],
        });
    };
    let isolated = if r >= 0.0 { roots[2] } else { roots[0] };

    let shifted = *m - SpinMatrix3::identity().scale(C64::new(isolated, 0.0));
    let rows = shifted.0;
    let candidates = [
        cross(rows[0], rows[1]),
        cross(rows[0], rows[2]),
        cross(rows[1], rows[2]),
    ];
    let mut u1 = candidates
        .iter()
        .copied()
        .max_by(|x, y| vnorm(x).total_cmp(&vnorm(y)))
        .unwrap_or([ONE, ZERO, ZERO]);
    let n1 = vnorm(&u1);
    if n1 == 0.0 {
        u1 = [ONE, ZERO, ZERO];
    } else {
        u1.iter_mut().for_each(|x| *x /= n1);
    }

    // Orthonormal complement by Gram-Schmidt on the canonical basis vector
    // least aligned with u1.
    let k = (0..3)
        .min_by(|&i, &j| u1[i].norm().total_cmp(&u1[j].norm()))
        .unwrap_or(0);
    let mut e = [ZERO; 3];
    e[k] = ONE;
    let proj = inner(&u1, &e);
    let mut u2 = [e[0] - proj * u1[0], e[1] - proj * u1[1], e[2] - proj * u1[2]];
    let n2 = vnorm(&u2);
    u2.iter_mut().for_each(|x| *x /= n2);
    let c = cross(u1, u2);
    let u3 = [c[0].conj(), c[1].conj(), c[2].conj()];

    let mu2 = m.apply(u2);
    let mu3 = m.apply(u3);
    let mut block = SpinMatrix2([
        [inner(&u2, &mu2), inner(&u2, &mu3)],
        [inner(&u3, &mu2), inner(&u3, &mu3)],
    ]);
    // Symmetrize away rounding before the Hermitian 2×2 solve.
    let h = (block + block.dagger()).scale(C64::new(0.5, 0.0));
    block = h;
    let sub = eig2(&block)?;

    let mut pairs: Vec<(f64, [C64; 3])> = vec![(isolated, u1)];
    for k in 0..2 {
        let cv = sub.vectors[k];
        let v = [
            cv[0] * u2[0] + cv[1] * u3[0],
            cv[0] * u2[1] + cv[1] * u3[1],
            cv[0] * u2[2] + cv[1] * u3[2],
        ];
        pairs.push((sub.values[k], v));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(Eigh3 {
        values: [pairs[0].0, pairs[1].0, pairs[2].0],
        vectors: [pairs[0].1, pairs[1].1, pairs[2].1],
    })
}

/// Ascending eigenvalues of a Hermitian 3×3 matrix (Cardano with deflation).
pub fn eig3_cardano(m: &SpinMatrix3) -> Result<[f64; 3]> {
    Ok(eigh3(m)?.values)
}

/// exp(i·s·M) for Hermitian M via its eigen-decomposition.
pub fn exp_i_hermitian3(m: &SpinMatrix3, s: f64) -> Result<SpinMatrix3> {
    let e = eigh3(m)?;
    let mut out = SpinMatrix3::zero();
    for k in 0..3 {
        let ph = C64::from_polar(1.0, s * e.values[k]);
        let v = e.vectors[k];
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] += ph * v[r] * v[c].conj();
            }
        }
    }
    Ok(out)
}
