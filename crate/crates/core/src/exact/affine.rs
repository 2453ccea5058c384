use num_traits::{Signed, Zero};

use super::cone::Cone;
use super::linalg::{nullspace, rank, QVector};
use super::{GeomError, Rat};

/// The affine subspace `base + span(dirs)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    base: QVector,
    dirs: Vec<QVector>,
}

impl AffineSubspace {
    pub fn new(base: QVector, dirs: Vec<QVector>) -> Result<Self, GeomError> {
        let n = base.len();
        if let Some(d) = dirs.iter().find(|d| d.len() != n) {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                found: d.len(),
            });
        }
        if rank(&dirs, n) != dirs.len() {
            return Err(GeomError::InvalidAffine(
                "direction vectors are linearly dependent".into(),
            ));
        }
        Ok(AffineSubspace { base, dirs })
    }

    /// The hyperplane `{x : a . x = value}`.
    pub fn hyperplane(a: &QVector, value: Rat) -> Result<Self, GeomError> {
        let n = a.len();
        let Some(i) = (0..n).find(|&i| !a[i].is_zero()) else {
            return Err(GeomError::InvalidAffine("zero functional".into()));
        };
        let mut base = QVector::zeros(n);
        let mut coords = base.clone().into_coords();
        coords[i] = value / &a[i];
        base = QVector::new(coords);
        AffineSubspace::new(base, nullspace(std::slice::from_ref(a), n))
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn base(&self) -> &QVector {
        &self.base
    }

    pub fn dirs(&self) -> &[QVector] {
        &self.dirs
    }

    /// True when the subspace avoids the origin.
    pub fn is_affine_proper(&self) -> bool {
        let mut rows = self.dirs.clone();
        rows.push(self.base.clone());
        rank(&rows, self.ambient_dim()) == self.dirs.len() + 1
    }

    pub fn contains(&self, p: &QVector) -> bool {
        let diff = p.sub(&self.base);
        let mut rows = self.dirs.clone();
        let r = rank(&rows, self.ambient_dim());
        rows.push(diff);
        rank(&rows, self.ambient_dim()) == r
    }

    pub fn point(&self, coeffs: &[Rat]) -> QVector {
        self.dirs
            .iter()
            .zip(coeffs)
            .fold(self.base.clone(), |acc, (d, c)| acc.axpy(c, d))
    }

    /// `(a, value)` with `self = {x : a . x = value}`, for hyperplanes.
    fn equation(&self) -> Option<(QVector, Rat)> {
        let n = self.ambient_dim();
        if self.dirs.len() + 1 != n {
            return None;
        }
        let a = nullspace(&self.dirs, n).pop()?;
        let value = a.dot(&self.base);
        Some((a, value))
    }
}

/// Vertices of `c ∩ h`, one per extreme ray, in the order of `c.rays()`.
pub fn cross_section(c: &Cone, h: &AffineSubspace) -> Result<Vec<QVector>, GeomError> {
    if h.ambient_dim() != c.ambient_dim() {
        return Err(GeomError::DimensionMismatch {
            expected: c.ambient_dim(),
            found: h.ambient_dim(),
        });
    }
    if !c.is_pointed() {
        return Err(GeomError::NotABase("cone is not pointed".into()));
    }
    let Some((a, value)) = h.equation() else {
        return Err(GeomError::NotABase("not a hyperplane".into()));
    };
    if value.is_zero() {
        return Err(GeomError::NotABase("hyperplane passes through 0".into()));
    }
    c.rays()
        .iter()
        .map(|r| {
            let ar = a.dot(r);
            if ar.is_zero() || (&value / &ar).is_negative() {
                return Err(GeomError::NotABase(format!("ray {r} misses the hyperplane")));
            }
            Ok(r.scale(&(&value / &ar)))
        })
        .collect()
}
