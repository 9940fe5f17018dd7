//! Pulling a Weierstrass surface back along a Galois cover of `P^1`:
//! branch-fiber hypotheses, upstairs fibers and the Tjurina class.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::covers::{Cover, Locus};
use crate::error::{Error, Result};
use crate::poly::{Place, Poly};
use crate::repring::VirtualModule;
use crate::weierstrass::{kodaira_type, Kodaira, SurfaceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// Every branch fiber is smooth.
    SmoothBranch,
    /// Every branch fiber is smooth or multiplicative.
    SemistableBranch,
    Violated,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::SmoothBranch => "smooth_branch",
            Hypothesis::SemistableBranch => "semistable_branch",
            Hypothesis::Violated => "violated",
        })
    }
}

/// Branch points of one locus lying in one fiber cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchFiber {
    pub locus: String,
    /// Places of the surface cluster containing these points.
    pub place: Place,
    pub points: u32,
    pub e: u32,
    pub kodaira: Kodaira,
}

/// Fibers of the pulled-back surface over the preimage of one cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberUp {
    /// Downstairs cluster.
    pub over: String,
    pub kodaira: Kodaira,
    /// Number of upstairs points carrying this fiber type.
    pub count: u32,
    /// Ramification index over these points.
    pub e: u32,
}

/// Splits every branch locus of `cover` along the fiber clusters of `report`.
pub fn branch_fibers(report: &SurfaceReport, cover: &Cover) -> Result<Vec<BranchFiber>> {
    if cover.base_genus() != 0 {
        return Err(Error::InvalidCover(
            "Weierstrass surfaces live over P^1; the cover has a base of positive genus".into(),
        ));
    }
    let mut out = Vec::new();
    for b in cover.branches() {
        let place = match &b.locus {
            Locus::Label(l) => return Err(Error::UnmatchedBranch(l.clone())),
            Locus::Place(p) => p,
        };
        match place {
            Place::Infinity => {
                let fiber = report.fibers.iter().find(|f| *f.place() == Place::Infinity);
                out.push(BranchFiber {
                    locus: b.locus.to_string(),
                    place: Place::Infinity,
                    points: 1,
                    e: b.e,
                    kodaira: fiber.map(|f| f.kodaira).unwrap_or(Kodaira::I(0)),
                });
            }
            Place::Finite(q) => {
                let mut matched = 0;
                for f in &report.fibers {
                    let Place::Finite(c) = f.place() else {
                        continue;
                    };
                    let g = q.gcd(c);
                    let k = g.degree().unwrap_or(0) as u32;
                    if k > 0 {
                        matched += k;
                        out.push(BranchFiber {
                            locus: b.locus.to_string(),
                            place: Place::Finite(g),
                            points: k,
                            e: b.e,
                            kodaira: f.kodaira,
                        });
                    }
                }
                if matched < b.count {
                    let mut rest: Poly = q.clone();
                    for bf in out.iter().filter(|x| x.locus == b.locus.to_string()) {
                        if let Place::Finite(g) = &bf.place {
                            rest = rest.div_exact(g)?;
                        }
                    }
                    out.push(BranchFiber {
                        locus: b.locus.to_string(),
                        place: Place::Finite(rest.monic()),
                        points: b.count - matched,
                        e: b.e,
                        kodaira: Kodaira::I(0),
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn classify_hypothesis(report: &SurfaceReport, cover: &Cover) -> Result<Hypothesis> {
    let fibers = branch_fibers(report, cover)?;
    Ok(classify(&fibers))
}

fn classify(fibers: &[BranchFiber]) -> Hypothesis {
    if fibers.iter().all(|f| f.kodaira.is_smooth()) {
        Hypothesis::SmoothBranch
    } else if fibers.iter().all(|f| f.kodaira.is_semistable()) {
        Hypothesis::SemistableBranch
    } else {
        Hypothesis::Violated
    }
}

/// Fibers of the base-changed surface; errors when an additive fiber sits
/// over a branch point.
pub fn pullback_fibers(report: &SurfaceReport, cover: &Cover) -> Result<Vec<FiberUp>> {
    let branch = branch_fibers(report, cover)?;
    if let Some(bad) = branch.iter().find(|f| !f.kodaira.is_semistable()) {
        return Err(Error::Hypothesis(format!(
            "additive fiber of type {} over the branch locus {}",
            bad.kodaira, bad.locus
        )));
    }
    let order = cover.group_order();
    let mut out = Vec::new();
    for fiber in &report.fibers {
        let mut ramified_points = 0;
        for bf in branch.iter().filter(|b| overlaps(&b.place, fiber.place())) {
            let c = &fiber.cluster;
            let up = kodaira_type(c.v_a.scale(bf.e), c.v_b.scale(bf.e), c.v_d.scale(bf.e))?;
            let Kodaira::I(k) = fiber.kodaira else {
                unreachable!("branch fibers are semistable");
            };
            if up != Kodaira::I(bf.e * k) {
                return Err(Error::Internal(format!(
                    "{} pulled back with e = {} gave {up}",
                    fiber.kodaira, bf.e
                )));
            }
            ramified_points += bf.points;
            out.push(FiberUp {
                over: fiber.place().to_string(),
                kodaira: up,
                count: bf.points * order / bf.e,
                e: bf.e,
            });
        }
        let unramified = fiber.degree() - ramified_points;
        if unramified > 0 {
            out.push(FiberUp {
                over: fiber.place().to_string(),
                kodaira: fiber.kodaira,
                count: unramified * order,
                e: 1,
            });
        }
    }
    let euler: u32 = out.iter().map(|f| f.count * f.kodaira.euler_number()).sum();
    if euler != 12 * report.n() * order {
        return Err(Error::Internal(format!(
            "upstairs Euler number {euler} != 12 n |G| = {}",
            12 * report.n() * order
        )));
    }
    Ok(out)
}

fn overlaps(branch: &Place, cluster: &Place) -> bool {
    match (branch, cluster) {
        (Place::Infinity, Place::Infinity) => true,
        (Place::Finite(a), Place::Finite(b)) => !a.gcd(b).is_constant(),
        _ => false,
    }
}

/// `[H^0(T)] = mu [C[G]]` when the branch fibers are smooth.
pub fn tjurina_class(report: &SurfaceReport, cover: &Cover) -> Result<VirtualModule> {
    match classify_hypothesis(report, cover)? {
        Hypothesis::SmoothBranch => {
            Ok(VirtualModule::regular(cover.table()).scale(report.mu as i64))
        }
        Hypothesis::SemistableBranch => Err(Error::TjurinaUnavailable),
        Hypothesis::Violated => Err(Error::Hypothesis(
            "additive fiber over a branch point".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseChangeReport {
    pub hypothesis: Hypothesis,
    pub branch_fibers: Vec<BranchFiber>,
    pub fibers_up: Vec<FiberUp>,
    pub mu_up: u32,
    pub c_e_up: u32,
    pub d_e_up: u32,
    pub tjurina: Option<VirtualModule>,
}

impl BaseChangeReport {
    pub fn new(report: &SurfaceReport, cover: &Cover) -> Result<Self> {
        let branch = branch_fibers(report, cover)?;
        let hypothesis = classify(&branch);
        let fibers_up = pullback_fibers(report, cover)?;
        let sum = |f: &dyn Fn(Kodaira) -> u32| -> u32 {
            fibers_up.iter().map(|x| x.count * f(x.kodaira)).sum()
        };
        let mu_up = sum(&|k| k.milnor_number());
        let c_e_up = sum(&|k| k.conductor_exponent());
        let d_e_up = sum(&|k| k.euler_number());
        if mu_up + c_e_up != d_e_up {
            return Err(Error::Internal("mu != d_E - c_E upstairs".into()));
        }
        let tjurina = match hypothesis {
            Hypothesis::SmoothBranch => {
                if mu_up != cover.group_order() * report.mu {
                    return Err(Error::Internal(format!(
                        "smooth branch fibers but mu upstairs = {mu_up}"
                    )));
                }
                Some(tjurina_class(report, cover)?)
            }
            _ => None,
        };
        Ok(BaseChangeReport {
            hypothesis,
            branch_fibers: branch,
            fibers_up,
            mu_up,
            c_e_up,
            d_e_up,
            tjurina,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::BranchPoint;
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

    fn tally(fibers: &[FiberUp]) -> Vec<(String, u32)> {
        let mut v: Vec<(String, u32)> = fibers
            .iter()
            .map(|f| (f.kodaira.to_string(), f.count))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn smooth_branch_running_example() {
        let r = running();
        let c = z2_at(&["1", "2"]);
        assert_eq!(
            classify_hypothesis(&r, &c).unwrap(),
            Hypothesis::SmoothBranch
        );
        let bc = BaseChangeReport::new(&r, &c).unwrap();
        assert_eq!(
            tally(&bc.fibers_up),
            vec![("I1".into(), 2), ("II".into(), 2), ("IIIstar".into(), 2)]
        );
        assert_eq!(bc.mu_up, 14);
        assert_eq!(bc.tjurina.unwrap().multiplicities(), &[7, 7]);
    }

    #[test]
    fn semistable_branch() {
        let r = running();
        let c = z2_at(&["-27/4", "1"]);
        assert_eq!(
            classify_hypothesis(&r, &c).unwrap(),
            Hypothesis::SemistableBranch
        );
        let bc = BaseChangeReport::new(&r, &c).unwrap();
        assert!(bc.tjurina.is_none());
        assert!(bc
            .fibers_up
            .iter()
            .any(|f| f.kodaira == Kodaira::I(2) && f.count == 1));
        assert!(matches!(
            tjurina_class(&r, &c),
            Err(Error::TjurinaUnavailable)
        ));
    }

    #[test]
    fn additive_branch_is_violation() {
        let r = running();
        let c = z2_at(&["0", "1"]);
        assert_eq!(classify_hypothesis(&r, &c).unwrap(), Hypothesis::Violated);
        assert!(matches!(pullback_fibers(&r, &c), Err(Error::Hypothesis(_))));
        let c = z2_at(&["inf", "1"]);
        assert_eq!(classify_hypothesis(&r, &c).unwrap(), Hypothesis::Violated);
    }

    #[test]
    fn labels_cannot_be_matched() {
        let r = running();
        let c = z2_at(&["p", "q"]);
        assert!(matches!(
            classify_hypothesis(&r, &c),
            Err(Error::UnmatchedBranch(_))
        ));
    }

    #[test]
    fn superelliptic_branch_through_irrational_cluster() {
        // f = 4t + 27 times t - 1: one branch point in the I1 cluster
        let r = running();
        let f = &Poly::from_i64s(&[27, 4]) * &Poly::from_i64s(&[-1, 1]);
        let c = Cover::superelliptic(2, f).unwrap();
        let bf = branch_fibers(&r, &c).unwrap();
        assert_eq!(bf.len(), 2);
        assert_eq!(classify(&bf), Hypothesis::SemistableBranch);
        let up = pullback_fibers(&r, &c).unwrap();
        assert_eq!(
            tally(&up),
            vec![("I2".into(), 1), ("II".into(), 2), ("IIIstar".into(), 2)]
        );
    }

    #[test]
    fn zero_milnor_surface() {
        let r = WeierstrassSurface::new(
            1,
            Poly::from_i64s(&[-3]),
            Poly::from_i64s(&[2, 1, 0, 0, 0, 0, 1]),
        )
        .unwrap()
        .report()
        .unwrap();
        let c = z2_at(&["1", "2"]);
        assert!(tjurina_class(&r, &c).unwrap().is_zero());
    }
}
