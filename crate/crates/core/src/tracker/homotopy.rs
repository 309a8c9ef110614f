use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, PolynomialSystem, C64};
use crate::rng::{self, stream};

/// How a variable group's behaviour at infinity is reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupRole {
    /// Divergence of this group means the whole path is at infinity.
    Primary,
    /// Divergence here with finite primary coordinates is reported
    /// separately (the multiplier block of the critical homotopy).
    Auxiliary,
}

/// One block of unknowns tracked on its own random affine patch.
#[derive(Clone, Debug)]
pub struct VarGroup {
    pub role: GroupRole,
    /// Indices of the group's affine unknowns (same in both layouts).
    pub members: Vec<usize>,
    /// Index of the homogenizing coordinate in the projective layout.
    pub hom: usize,
    /// Patch `sum patch[k] * v[k] = 1` over `members` then `hom`.
    patch: Vec<C64>,
}

/// Parameters that produced a critical-point homotopy.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalMeta {
    pub z: Vec<f64>,
    pub gamma: C64,
    pub y: Vec<f64>,
    pub alpha: Vec<C64>,
}

/// A square polynomial homotopy `H(v, t)`.
///
/// The affine form has `M` unknowns plus `t` as its last variable. Every
/// equation is homogenized per variable group and the groups are put on
/// random affine patches, so tracking happens in a product of projective
/// spaces and diverging paths stay finite.
#[derive(Clone, Debug)]
pub struct Homotopy {
    affine: PolynomialSystem,
    projective: PolynomialSystem,
    groups: Vec<VarGroup>,
    pub meta: Option<CriticalMeta>,
}

/// Values and derivatives of the projective system at `(v, t)`.
pub struct HomotopyEval {
    pub value: DVector<C64>,
    pub jac: DMatrix<C64>,
    pub dt: DVector<C64>,
}

impl Homotopy {
    /// Single-group homotopy over all unknowns.
    pub fn new(affine: PolynomialSystem, patch_seed: u64) -> Result<Self> {
        let m = affine.nvars().saturating_sub(1);
        Self::with_groups(affine, vec![(GroupRole::Primary, (0..m).collect())], patch_seed)
    }

    /// `affine` has the unknowns first and `t` last; `groups` must
    /// partition the unknowns.
    pub fn with_groups(
        affine: PolynomialSystem,
        groups: Vec<(GroupRole, Vec<usize>)>,
        patch_seed: u64,
    ) -> Result<Self> {
        if affine.nvars() < 2 {
            return Err(Error::InvalidConfig("homotopy needs at least one unknown and t".into()));
        }
        let m = affine.nvars() - 1;
        if affine.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: affine.len() });
        }
        let mut seen = vec![false; m];
        for (_, g) in &groups {
            if g.is_empty() {
                return Err(Error::InvalidConfig("empty variable group".into()));
            }
            for &k in g {
                if k >= m || seen[k] {
                    return Err(Error::InvalidConfig("variable groups must partition the unknowns".into()));
                }
                seen[k] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidConfig("variable groups must partition the unknowns".into()));
        }

        let ng = groups.len();
        let pvars = m + ng + 1;
        let t_index = m + ng;
        let map: Vec<usize> = (0..m).chain(std::iter::once(t_index)).collect();
        let mut rows: Vec<Polynomial> = affine.polys().iter().map(|p| p.remap(pvars, &map)).collect();

        let mut rng = rng::seeded(patch_seed, stream::PATCHES);
        let mut vgroups = Vec::with_capacity(ng);
        for (g, (role, members)) in groups.into_iter().enumerate() {
            let hom = m + g;
            for row in rows.iter_mut() {
                let d = row.degree_in(&members).max(0) as u32;
                *row = row.homogenize_in(&members, hom, d);
            }
            let patch: Vec<C64> = (0..=members.len())
                .map(|_| rng::unit_complex(&mut rng) * rng.gen_range(0.5..1.5))
                .collect();
            vgroups.push(VarGroup { role, members, hom, patch });
        }
        for g in &vgroups {
            let mut coeffs = vec![C64::new(0.0, 0.0); pvars];
            for (k, &v) in g.members.iter().enumerate() {
                coeffs[v] = g.patch[k];
            }
            coeffs[g.hom] = g.patch[g.members.len()];
            rows.push(Polynomial::linear(&coeffs, C64::new(-1.0, 0.0)));
        }
        let mut names = affine.variables()[..m].to_vec();
        names.extend((0..ng).map(|g| format!("hom{g}")));
        names.push(affine.variables()[m].clone());
        let projective = PolynomialSystem::new(names, rows)?;
        Ok(Homotopy { affine, projective, groups: vgroups, meta: None })
    }

    /// Number of affine unknowns `M`.
    pub fn affine_dim(&self) -> usize {
        self.affine.nvars() - 1
    }

    /// Number of projective unknowns, `M` plus one per group.
    pub fn dim(&self) -> usize {
        self.projective.nvars() - 1
    }

    pub fn groups(&self) -> &[VarGroup] {
        &self.groups
    }

    pub fn affine_system(&self) -> &PolynomialSystem {
        &self.affine
    }

    pub fn projective_system(&self) -> &PolynomialSystem {
        &self.projective
    }

    /// `H(., t)` as an affine system in the unknowns.
    pub fn at(&self, t: C64) -> PolynomialSystem {
        self.affine.specialize(self.affine_dim(), t).expect("square system stays nonempty")
    }

    pub fn eval(&self, v: &[C64], t: C64) -> HomotopyEval {
        let n = self.dim();
        let mut point = Vec::with_capacity(n + 1);
        point.extend_from_slice(v);
        point.push(t);
        let (value, full) = self.projective.eval_with_jacobian(&point);
        let jac = full.columns(0, n).into_owned();
        let dt = full.column(n).into_owned();
        HomotopyEval { value, jac, dt }
    }

    /// Values of the projective system at `(v, t)` in double-double.
    pub fn value_wide(&self, v: &[C64], t: C64) -> DVector<C64> {
        let mut point = Vec::with_capacity(v.len() + 1);
        point.extend_from_slice(v);
        point.push(t);
        self.projective.evaluate_wide(&point)
    }

    /// Affine point to patch coordinates.
    pub fn lift(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.affine_dim());
        let mut v = vec![C64::new(0.0, 0.0); self.dim()];
        for g in &self.groups {
            let mut s = g.patch[g.members.len()];
            for (k, &i) in g.members.iter().enumerate() {
                s += g.patch[k] * x[i];
            }
            let scale = C64::new(1.0, 0.0) / s;
            for &i in &g.members {
                v[i] = x[i] * scale;
            }
            v[g.hom] = scale;
        }
        v
    }

    /// Patch coordinates to affine coordinates (non-finite entries when a
    /// homogenizing coordinate vanishes).
    pub fn dehomogenize(&self, v: &[C64]) -> Vec<C64> {
        let mut x = vec![C64::new(0.0, 0.0); self.affine_dim()];
        for g in &self.groups {
            let h = v[g.hom];
            for &i in &g.members {
                x[i] = v[i] / h;
            }
        }
        x
    }

    /// `|v_hom| / |v_group|` for group `g`; zero exactly at infinity.
    pub fn hom_ratio(&self, v: &[C64], g: usize) -> f64 {
        let grp = &self.groups[g];
        let h = v[grp.hom].norm();
        let n = (grp.members.iter().map(|&i| v[i].norm_sqr()).sum::<f64>() + h * h).sqrt();
        if n == 0.0 {
            0.0
        } else {
            h / n
        }
    }

    /// Rescales each group of a projective point onto its patch.
    pub fn renormalize(&self, v: &mut [C64]) {
        for g in &self.groups {
            let mut s = g.patch[g.members.len()] * v[g.hom];
            for (k, &i) in g.members.iter().enumerate() {
                s += g.patch[k] * v[i];
            }
            if s.norm() > 0.0 {
                for &i in &g.members {
                    v[i] /= s;
                }
                v[g.hom] /= s;
            }
        }
    }

    /// `v` with every group scaled to unit norm, then `t` appended.
    fn unit_groups(&self, v: &[C64], t: C64) -> Vec<C64> {
        let mut w: Vec<C64> = v.to_vec();
        for g in &self.groups {
            let n = (g.members.iter().map(|&i| w[i].norm_sqr()).sum::<f64>() + w[g.hom].norm_sqr()).sqrt();
            if n > 0.0 {
                for &i in &g.members {
                    w[i] /= n;
                }
                w[g.hom] /= n;
            }
        }
        w.push(t);
        w
    }

    /// Jacobian in the unknowns at the unit-normalized point, each row
    /// divided by `1 + sum |c||monomial|`. Unlike row normalization this
    /// keeps a row whose gradient vanishes small.
    pub fn coefficient_scaled_jacobian(&self, v: &[C64], t: C64) -> DMatrix<C64> {
        let w = self.unit_groups(v, t);
        let n = self.dim();
        let (_, full) = self.projective.eval_with_jacobian(&w);
        let abs = self.projective.eval_abs(&w);
        let mut jac = full.columns(0, n).into_owned();
        for (i, mut row) in jac.row_iter_mut().enumerate() {
            row /= C64::new(1.0 + abs[i], 0.0);
        }
        jac
    }

    /// Residual of the homogenized equations with every group scaled to
    /// unit norm, each row divided by `1 + sum |c||monomial|`.
    pub fn scaled_residual(&self, v: &[C64], t: C64) -> f64 {
        let w = self.unit_groups(v, t);
        let vals = self.projective.evaluate(&w).expect("length checked");
        let abs = self.projective.eval_abs(&w);
        let m = self.affine_dim();
        (0..m).map(|i| vals[i].norm() / (1.0 + abs[i])).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_system;

    #[test]
    fn lift_and_dehomogenize_round_trip() {
        let sys = parse_system("variables: x y t\nx^2 - t*y\nx*y - 1").unwrap();
        let h = Homotopy::with_groups(
            sys,
            vec![(GroupRole::Primary, vec![0]), (GroupRole::Auxiliary, vec![1])],
            3,
        )
        .unwrap();
        assert_eq!(h.dim(), 4);
        let x = [C64::new(0.3, -1.2), C64::new(2.0, 0.5)];
        let v = h.lift(&x);
        let back = h.dehomogenize(&v);
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).norm() < 1e-14);
        }
        // the patch rows vanish on lifted points
        let e = h.eval(&v, C64::new(0.7, 0.0));
        assert!(e.value[2].norm() < 1e-14 && e.value[3].norm() < 1e-14);
    }

    #[test]
    fn rows_are_homogeneous_per_group() {
        let sys = parse_system("variables: x y t\nx^2 + x + t\ny*x - 2").unwrap();
        let h = Homotopy::with_groups(
            sys,
            vec![(GroupRole::Primary, vec![0]), (GroupRole::Auxiliary, vec![1])],
            0,
        )
        .unwrap();
        for p in &h.projective_system().polys()[..2] {
            assert!(p.is_homogeneous_in(&[0, 2]));
            assert!(p.is_homogeneous_in(&[1, 3]));
        }
    }

    #[test]
    fn rejects_non_partition() {
        let sys = parse_system("variables: x y t\nx - t\ny - 1").unwrap();
        assert!(Homotopy::with_groups(sys, vec![(GroupRole::Primary, vec![0])], 0).is_err());
    }
}
