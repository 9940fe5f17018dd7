//! Shioda–Tate bookkeeping after base change and the resulting bounds on the
//! Mordell–Weil rank over the function field of the cover.

use crate::basechange::{classify_hypothesis, tjurina_class, Hypothesis};
use crate::covers::Cover;
use crate::engine::{evaluate, hodge_middle, BundleSpec};
use crate::error::{Error, Result};
use crate::repring::VirtualModule;
use crate::weierstrass::SurfaceReport;

pub const DISCREPANCY_NOTE: &str = "pal_bound uses c_E - d_E/6 (equivalently 10n - mu); \
    pal_bound_plus_variant evaluates the same expression with +d_E/6";

/// `2[C] + [H^0(T)]`: zero section, fiber class and the exceptional curves.
pub fn trivial_lattice_class(tjurina: &VirtualModule) -> VirtualModule {
    &VirtualModule::trivial(tjurina.table()).scale(2) + tjurina
}

fn require_smooth_branch(report: &SurfaceReport, cover: &Cover) -> Result<()> {
    if report.isotrivial {
        return Err(Error::Isotrivial);
    }
    match classify_hypothesis(report, cover)? {
        Hypothesis::SmoothBranch => Ok(()),
        h => Err(Error::Hypothesis(format!(
            "the rank bound needs smooth fibers over every branch point, found {h}"
        ))),
    }
}

/// `(10n - mu)[C[G]] + [H^0(K)] + dual [H^0(K)] - 2[C]`, checked against
/// `[H^{1,1}(X')]` minus the trivial lattice.
pub fn covering_module(report: &SurfaceReport, cover: &Cover) -> Result<VirtualModule> {
    require_smooth_branch(report, cover)?;
    let table = cover.table();
    let h0k = cover.h0_canonical()?;
    let reg = VirtualModule::regular(table);
    let triv = VirtualModule::trivial(table);
    let free = 10 * report.n() as i64 - report.mu as i64;
    let m = &(&reg.scale(free) + &(&h0k + &h0k.dual())) - &triv.scale(2);

    let h11_class = hodge_middle(1, &BundleSpec::weierstrass(report.n()), false)?;
    let h11 = evaluate(&h11_class, &h0k, None)?;
    let lattice = trivial_lattice_class(&tjurina_class(report, cover)?);
    if &h11 - &lattice != m {
        return Err(Error::Internal(format!(
            "H^1,1 - trivial lattice = {:?} but the closed form gives {m:?}",
            &h11 - &lattice
        )));
    }
    if !m.is_effective() {
        return Err(Error::Internal(format!(
            "covering module {m:?} is not a module"
        )));
    }
    Ok(m)
}

/// `epsilon (c_E - d_E/6 + 2g - 2 + s)` and the `+d_E/6` variant.
pub fn pal_bounds(report: &SurfaceReport, cover: &Cover, epsilon: u32) -> Result<(i64, i64)> {
    require_smooth_branch(report, cover)?;
    if epsilon == 0 {
        return Err(Error::Config("epsilon must be positive".into()));
    }
    if !report.d_e.is_multiple_of(6) {
        return Err(Error::Internal(format!(
            "d_E = {} not divisible by 6",
            report.d_e
        )));
    }
    let e = 2 * cover.base_genus() as i64 - 2 + cover.branch_count() as i64;
    let c = report.c_e as i64;
    let d6 = report.d_e as i64 / 6;
    let eps = epsilon as i64;
    Ok((eps * (c - d6 + e), eps * (c + d6 + e)))
}

pub fn pal_bound(report: &SurfaceReport, cover: &Cover, epsilon: u32) -> Result<i64> {
    Ok(pal_bounds(report, cover, epsilon)?.0)
}

/// Nonzero constituents `(character index, multiplicity, degree)`.
pub fn per_isotypic(m: &VirtualModule) -> Vec<(usize, i64, i64)> {
    m.multiplicities()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| (i, k, m.table().dims()[i]))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MwReport {
    pub module: VirtualModule,
    pub trivial_lattice: VirtualModule,
    pub rank_bound_dim: i64,
    pub pal_bound: i64,
    pub pal_bound_plus_variant: i64,
    pub epsilon: u32,
    pub per_isotypic: Vec<(usize, i64, i64)>,
}

impl MwReport {
    /// `epsilon` defaults to `|G|`.
    pub fn new(report: &SurfaceReport, cover: &Cover, epsilon: Option<u32>) -> Result<Self> {
        let module = covering_module(report, cover)?;
        let epsilon = epsilon.unwrap_or(cover.group_order());
        let (pal, variant) = pal_bounds(report, cover, epsilon)?;
        let rank_bound_dim = module.dimension();
        let (full, _) = pal_bounds(report, cover, cover.group_order())?;
        if full < rank_bound_dim {
            return Err(Error::Internal(format!(
                "bound with epsilon = |G| is {full} < dim M = {rank_bound_dim}"
            )));
        }
        Ok(MwReport {
            trivial_lattice: trivial_lattice_class(&tjurina_class(report, cover)?),
            per_isotypic: per_isotypic(&module),
            module,
            rank_bound_dim,
            pal_bound: pal,
            pal_bound_plus_variant: variant,
            epsilon,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::BranchPoint;
    use crate::poly::Poly;
    use crate::repring::CharacterTable;
    use crate::weierstrass::WeierstrassSurface;
    use std::sync::Arc;

    fn running() -> SurfaceReport {
        WeierstrassSurface::new(1, Poly::from_i64s(&[0, 1]), Poly::from_i64s(&[0, 1]))
            .unwrap()
            .report()
            .unwrap()
    }

    fn z2_at(points: &[&str]) -> Cover {
        let z2 = Arc::new(CharacterTable::cyclic(2).unwrap());
        Cover::abstract_cover(
            z2,
            0,
            points.iter().map(|p| (BranchPoint::parse(p), 1)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn running_example() {
        let r = running();
        let c = z2_at(&["1", "2"]);
        let mw = MwReport::new(&r, &c, None).unwrap();
        assert_eq!(mw.module.multiplicities(), &[1, 3]);
        assert_eq!(mw.rank_bound_dim, 4);
        assert_eq!(mw.epsilon, 2);
        assert_eq!(mw.pal_bound, 6);
        assert_eq!(mw.pal_bound_plus_variant, 14);
        assert_eq!(mw.trivial_lattice.multiplicities(), &[9, 7]);
        assert_eq!(mw.per_isotypic, vec![(0, 1, 1), (1, 3, 1)]);
    }

    #[test]
    fn trivial_group() {
        let r = running();
        let m = covering_module(&r, &Cover::trivial()).unwrap();
        assert_eq!(m.dimension(), 1);
        let t = tjurina_class(&r, &Cover::trivial()).unwrap();
        assert_eq!(trivial_lattice_class(&t).dimension(), 9);
    }

    #[test]
    fn nodal_surface_bound() {
        let r = WeierstrassSurface::new(
            1,
            Poly::from_i64s(&[-3]),
            Poly::from_i64s(&[2, 1, 0, 0, 0, 0, 1]),
        )
        .unwrap()
        .report()
        .unwrap();
        assert_eq!(pal_bound(&r, &Cover::trivial(), 1).unwrap(), 12 - 2 - 2);
        let t = tjurina_class(&r, &z2_at(&["1", "2"])).unwrap();
        assert_eq!(trivial_lattice_class(&t).multiplicities(), &[2, 0]);
    }

    #[test]
    fn hypothesis_failures() {
        let r = running();
        assert!(matches!(
            covering_module(&r, &z2_at(&["0", "1"])),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            MwReport::new(&r, &z2_at(&["-27/4", "1"]), None),
            Err(Error::Hypothesis(_))
        ));
        let iso = WeierstrassSurface::new(1, Poly::zero(), Poly::from_i64s(&[-1, 0, 0, 0, 0, 1]))
            .unwrap()
            .report()
            .unwrap();
        assert!(matches!(
            covering_module(&iso, &Cover::trivial()),
            Err(Error::Isotrivial)
        ));
    }

    #[test]
    fn isotypic_listing() {
        let t = Arc::new(CharacterTable::dihedral(3).unwrap());
        let reg = VirtualModule::regular(&t);
        assert_eq!(per_isotypic(&reg), vec![(0, 1, 1), (1, 1, 1), (2, 2, 2)]);
        assert!(per_isotypic(&VirtualModule::zero(&t)).is_empty());
    }
}
