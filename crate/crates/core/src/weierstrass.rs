//! Short Weierstrass surfaces `y^2 = x^3 + A x + B` over `P^1`: minimality,
//! Kodaira classification and the global invariants `d_E`, `c_E`, `mu`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, MinimalityViolation, Result};
use crate::poly::{self, discriminant, Place, Poly, Valuation, ValuationCluster};

/// Kodaira fiber type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl Kodaira {
    pub fn is_smooth(self) -> bool {
        self == Kodaira::I(0)
    }

    /// Multiplicative or smooth.
    pub fn is_semistable(self) -> bool {
        matches!(self, Kodaira::I(_))
    }

    pub fn conductor_exponent(self) -> u32 {
        match self {
            Kodaira::I(0) => 0,
            Kodaira::I(_) => 1,
            _ => 2,
        }
    }

    pub fn euler_number(self) -> u32 {
        match self {
            Kodaira::I(m) => m,
            Kodaira::II => 2,
            Kodaira::III => 3,
            Kodaira::IV => 4,
            Kodaira::IStar(m) => m + 6,
            Kodaira::IVStar => 8,
            Kodaira::IIIStar => 9,
            Kodaira::IIStar => 10,
        }
    }

    /// Number of fiber components missing the zero section.
    pub fn milnor_number(self) -> u32 {
        match self {
            Kodaira::I(m) => m.saturating_sub(1),
            Kodaira::II => 0,
            Kodaira::III => 1,
            Kodaira::IV => 2,
            Kodaira::IStar(m) => m + 4,
            Kodaira::IVStar => 6,
            Kodaira::IIIStar => 7,
            Kodaira::IIStar => 8,
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(m) => write!(f, "I{m}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::IStar(m) => write!(f, "Istar{m}"),
            Kodaira::IVStar => write!(f, "IVstar"),
            Kodaira::IIIStar => write!(f, "IIIstar"),
            Kodaira::IIStar => write!(f, "IIstar"),
        }
    }
}

impl FromStr for Kodaira {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown Kodaira type {s:?}"));
        Ok(match s {
            "II" => Kodaira::II,
            "III" => Kodaira::III,
            "IV" => Kodaira::IV,
            "IVstar" => Kodaira::IVStar,
            "IIIstar" => Kodaira::IIIStar,
            "IIstar" => Kodaira::IIStar,
            _ => {
                if let Some(m) = s.strip_prefix("Istar") {
                    Kodaira::IStar(m.parse().map_err(|_| bad())?)
                } else if let Some(m) = s.strip_prefix('I') {
                    Kodaira::I(m.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl Serialize for Kodaira {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Kodaira {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Kodaira type of a minimal short Weierstrass model from the valuations
/// of `A`, `B` and `4A^3 + 27B^2` (residue characteristic 0).
pub fn kodaira_type(v_a: Valuation, v_b: Valuation, v_d: Valuation) -> Result<Kodaira> {
    use Valuation::Finite as F;
    let unclassified = || Error::UnclassifiedFiber {
        v_a: v_a.to_string(),
        v_b: v_b.to_string(),
        v_d: v_d.to_string(),
    };
    let Some(d) = v_d.finite() else {
        return Err(unclassified());
    };
    if d == 0 {
        return Ok(Kodaira::I(0));
    }
    if v_a == 0 {
        return Ok(Kodaira::I(d));
    }
    let ty = match (v_a, v_b, d) {
        (_, F(1), 2) => Kodaira::II,
        (F(1), b, 3) if b >= 2 => Kodaira::III,
        (a, F(2), 4) if a >= 2 => Kodaira::IV,
        (F(2), F(3), 6) => Kodaira::IStar(0),
        (a, F(3), 6) if a >= 3 => Kodaira::IStar(0),
        (F(2), b, 6) if b >= 4 => Kodaira::IStar(0),
        (F(2), F(3), d) if d > 6 => Kodaira::IStar(d - 6),
        (a, F(4), 8) if a >= 3 => Kodaira::IVStar,
        (F(3), b, 9) if b >= 5 => Kodaira::IIIStar,
        (a, F(5), 10) if a >= 4 => Kodaira::IIStar,
        _ => return Err(unclassified()),
    };
    Ok(ty)
}

/// Local data of one uniform cluster of singular fibers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberData {
    pub cluster: ValuationCluster,
    pub kodaira: Kodaira,
}

impl FiberData {
    pub fn from_cluster(cluster: ValuationCluster) -> Result<Self> {
        let kodaira = kodaira_type(cluster.v_a, cluster.v_b, cluster.v_d)?;
        if cluster.v_d != kodaira.euler_number() {
            return Err(Error::Internal(format!(
                "fiber {kodaira} with v(Delta) = {}",
                cluster.v_d
            )));
        }
        Ok(FiberData { cluster, kodaira })
    }

    pub fn place(&self) -> &Place {
        &self.cluster.place
    }

    /// Number of geometric points in the cluster.
    pub fn degree(&self) -> u32 {
        self.cluster.degree()
    }

    pub fn conductor_exponent(&self) -> u32 {
        self.kodaira.conductor_exponent()
    }

    pub fn milnor(&self) -> u32 {
        self.kodaira.milnor_number()
    }

    pub fn euler(&self) -> u32 {
        self.kodaira.euler_number()
    }
}

/// Short Weierstrass data with `deg A <= 4n`, `deg B <= 6n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassSurface {
    pub n: u32,
    pub a: Poly,
    pub b: Poly,
}

impl WeierstrassSurface {
    pub fn new(n: u32, a: Poly, b: Poly) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSurface("n = deg L must be positive".into()));
        }
        if a.degree().is_some_and(|d| d as u32 > 4 * n) {
            return Err(Error::InvalidSurface(format!(
                "deg A exceeds 4n = {}",
                4 * n
            )));
        }
        if b.degree().is_some_and(|d| d as u32 > 6 * n) {
            return Err(Error::InvalidSurface(format!(
                "deg B exceeds 6n = {}",
                6 * n
            )));
        }
        Ok(WeierstrassSurface { n, a, b })
    }

    pub fn discriminant(&self) -> Poly {
        discriminant(&self.a, &self.b)
    }

    pub fn clusters(&self) -> Result<Vec<ValuationCluster>> {
        poly::uniform_clusters(&self.a, &self.b, self.n)
    }

    /// The j-invariant is constant iff `A^3` and `Delta` are proportional.
    pub fn is_isotrivial(&self) -> bool {
        if self.a.is_zero() {
            return true;
        }
        let a3 = self.a.pow(3);
        let delta = self.discriminant();
        let (Some(la), Some(ld)) = (a3.leading(), delta.leading()) else {
            return true;
        };
        a3.scale(ld) == delta.scale(la)
    }

    /// Places where `v(A) >= 4` and `v(B) >= 6`.
    pub fn check_minimal(&self) -> Result<Vec<MinimalityViolation>> {
        let mut out = Vec::new();
        for c in self.clusters()? {
            if c.v_a >= 4 && c.v_b >= 6 {
                let suggested_n = match c.place {
                    Place::Infinity => {
                        let da = self.a.degree().unwrap_or(0) as u32;
                        let db = self.b.degree().unwrap_or(0) as u32;
                        let n = da.div_ceil(4).max(db.div_ceil(6));
                        (n >= 1 && n < self.n).then_some(n)
                    }
                    Place::Finite(_) => None,
                };
                out.push(MinimalityViolation {
                    place: c.place.to_string(),
                    v_a: c.v_a.to_string(),
                    v_b: c.v_b.to_string(),
                    suggested_n,
                });
            }
        }
        Ok(out)
    }

    pub fn ensure_minimal(&self) -> Result<()> {
        let v = self.check_minimal()?;
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::NonMinimal(v))
        }
    }

    pub fn report(&self) -> Result<SurfaceReport> {
        SurfaceReport::new(self)
    }
}

/// Global invariants of a minimal Weierstrass surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceReport {
    pub surface: WeierstrassSurface,
    pub d_e: u32,
    pub c_e: u32,
    pub mu: u32,
    pub isotrivial: bool,
    /// Singular fibers only.
    pub fibers: Vec<FiberData>,
}

impl SurfaceReport {
    pub fn new(surface: &WeierstrassSurface) -> Result<Self> {
        surface.ensure_minimal()?;
        let fibers = surface
            .clusters()?
            .into_iter()
            .map(FiberData::from_cluster)
            .filter(|f| !matches!(f, Ok(f) if f.kodaira.is_smooth()))
            .collect::<Result<Vec<_>>>()?;
        let n = surface.n;
        let sum = |f: &dyn Fn(&FiberData) -> u32| -> u32 {
            fibers.iter().map(|x| x.degree() * f(x)).sum()
        };
        let d_e = sum(&|x| x.cluster.v_d.finite().unwrap_or(0));
        let c_e = sum(&|x| x.conductor_exponent());
        let mu = sum(&|x| x.milnor());
        let euler = sum(&|x| x.euler());
        if d_e != 12 * n || euler != 12 * n || mu + c_e != d_e {
            return Err(Error::Internal(format!(
                "invariants inconsistent: d_E = {d_e}, euler = {euler}, c_E = {c_e}, mu = {mu}, n = {n}"
            )));
        }
        Ok(SurfaceReport {
            surface: surface.clone(),
            d_e,
            c_e,
            mu,
            isotrivial: surface.is_isotrivial(),
            fibers,
        })
    }

    pub fn n(&self) -> u32 {
        self.surface.n
    }

    /// Fiber type over a rational point or infinity.
    pub fn fiber_at(&self, point: &poly::Point) -> Kodaira {
        self.fibers
            .iter()
            .find(|f| f.place().contains(point))
            .map(|f| f.kodaira)
            .unwrap_or(Kodaira::I(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Point;
    use Valuation::{Finite as F, Infinite as Inf};

    fn surface(n: u32, a: &[i64], b: &[i64]) -> WeierstrassSurface {
        WeierstrassSurface::new(n, Poly::from_i64s(a), Poly::from_i64s(b)).unwrap()
    }

    /// Independent classification: potentially good reduction is decided by
    /// v(Delta) alone; otherwise v(j) < 0 gives I_n or I_n^*.
    fn oracle(va: Valuation, vd: u32) -> Option<Kodaira> {
        let vj_nonneg = match va {
            Inf => true,
            F(a) => 3 * a >= vd,
        };
        if vj_nonneg {
            return match vd {
                0 => Some(Kodaira::I(0)),
                2 => Some(Kodaira::II),
                3 => Some(Kodaira::III),
                4 => Some(Kodaira::IV),
                6 => Some(Kodaira::IStar(0)),
                8 => Some(Kodaira::IVStar),
                9 => Some(Kodaira::IIIStar),
                10 => Some(Kodaira::IIStar),
                _ => None,
            };
        }
        match va {
            F(0) => Some(Kodaira::I(vd)),
            F(2) if vd > 6 => Some(Kodaira::IStar(vd - 6)),
            _ => None,
        }
    }

    #[test]
    fn table_examples() {
        assert_eq!(kodaira_type(F(0), F(0), F(1)).unwrap(), Kodaira::I(1));
        assert_eq!(kodaira_type(F(1), F(1), F(2)).unwrap(), Kodaira::II);
        assert_eq!(kodaira_type(F(3), F(5), F(9)).unwrap(), Kodaira::IIIStar);
        assert_eq!(kodaira_type(F(2), F(3), F(8)).unwrap(), Kodaira::IStar(2));
        assert!(kodaira_type(F(4), F(6), F(12)).is_err());
    }

    /// Every triple realizable by local expansions `A = u t^a`, `B = w t^b`
    /// with minimal (a, b) is classified and agrees with the oracle.
    #[test]
    fn table_agrees_with_oracle_on_local_triples() {
        let vals: Vec<Valuation> = (0..=7).map(F).chain([Inf]).collect();
        for &va in &vals {
            for &vb in &vals {
                if va >= 4 && vb >= 6 {
                    continue;
                }
                let generic = match (va, vb) {
                    (F(a), F(b)) => (3 * a).min(2 * b),
                    (F(a), Inf) => 3 * a,
                    (Inf, F(b)) => 2 * b,
                    (Inf, Inf) => continue,
                };
                let mut deltas = vec![generic];
                // cancellation between 4A^3 and 27B^2 when 3a = 2b
                if let (F(a), F(b)) = (va, vb) {
                    if 3 * a == 2 * b {
                        deltas.extend(generic + 1..generic + 6);
                    }
                }
                for vd in deltas {
                    let got = kodaira_type(va, vb, F(vd)).unwrap();
                    assert_eq!(Some(got), oracle(va, vd), "triple ({va}, {vb}, {vd})");
                    assert_eq!(got.euler_number(), vd);
                    if vd > 0 {
                        assert_eq!(
                            got.milnor_number(),
                            got.euler_number() - got.conductor_exponent()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn strings_round_trip() {
        for k in [
            Kodaira::I(0),
            Kodaira::I(12),
            Kodaira::II,
            Kodaira::III,
            Kodaira::IV,
            Kodaira::IStar(0),
            Kodaira::IStar(3),
            Kodaira::IVStar,
            Kodaira::IIIStar,
            Kodaira::IIStar,
        ] {
            assert_eq!(k.to_string().parse::<Kodaira>().unwrap(), k);
        }
        assert_eq!(Kodaira::IStar(2).to_string(), "Istar2");
        assert!("Ix".parse::<Kodaira>().is_err());
    }

    #[test]
    fn running_example() {
        let s = surface(1, &[0, 1], &[0, 1]);
        assert!(s.check_minimal().unwrap().is_empty());
        assert!(!s.is_isotrivial());
        let r = s.report().unwrap();
        assert_eq!((r.d_e, r.c_e, r.mu), (12, 5, 7));
        assert_eq!(r.fiber_at(&Point::integer(0)), Kodaira::II);
        assert_eq!(r.fiber_at(&Point::Infinity), Kodaira::IIIStar);
        let root = Point::Rational(crate::poly::parse_rational("-27/4").unwrap());
        assert_eq!(r.fiber_at(&root), Kodaira::I(1));
        assert_eq!(r.fiber_at(&Point::integer(1)), Kodaira::I(0));
    }

    #[test]
    fn minimality_violations() {
        let s = surface(1, &[0, 0, 0, 0, 1], &[0, 0, 0, 0, 0, 0, 1]);
        let v = s.check_minimal().unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].place, "t");
        assert!(matches!(s.report(), Err(Error::NonMinimal(_))));
        // a surface that lives on n = 1 presented with n = 2
        let s = surface(2, &[0, 1], &[0, 1]);
        let v = s.check_minimal().unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].place, "inf");
        assert_eq!(v[0].suggested_n, Some(1));
    }

    #[test]
    fn isotrivial_j_zero_surface() {
        let s = surface(1, &[], &[-1, 0, 0, 0, 0, 1]);
        assert!(s.check_minimal().unwrap().is_empty());
        assert!(s.is_isotrivial());
        let r = s.report().unwrap();
        assert_eq!((r.d_e, r.c_e, r.mu), (12, 12, 0));
        assert_eq!(r.fibers.len(), 2);
        assert!(r.fibers.iter().all(|f| f.kodaira == Kodaira::II));
        assert!(surface(1, &[1, 1], &[]).is_isotrivial());
    }

    #[test]
    fn nodal_only_configuration() {
        // A = -3, B = t^6 + t + 2: 4A^3 + 27B^2 = 27 (t^6 + t)(t^6 + t + 4)
        let s = surface(1, &[-3], &[2, 1, 0, 0, 0, 0, 1]);
        let r = s.report().unwrap();
        assert!(s.discriminant().is_squarefree());
        assert_eq!(s.discriminant().degree(), Some(12));
        assert!(r.fibers.iter().all(|f| f.kodaira == Kodaira::I(1)));
        assert_eq!((r.c_e, r.mu), (12, 0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn global_invariants(
                n in 1u32..=2,
                a in prop::collection::vec(-3i64..=3, 0..=8),
                b in prop::collection::vec(-3i64..=3, 0..=12),
            ) {
                let a = &a[..a.len().min(4 * n as usize + 1)];
                let b = &b[..b.len().min(6 * n as usize + 1)];
                let s = surface(n, a, b);
                prop_assume!(!s.discriminant().is_zero());
                prop_assume!(s.check_minimal().unwrap().is_empty());
                let r = s.report().unwrap();
                prop_assert_eq!(r.d_e, 12 * n);
                prop_assert_eq!(r.mu, r.d_e - r.c_e);
                let euler: u32 = r.fibers.iter().map(|f| f.degree() * f.euler()).sum();
                prop_assert_eq!(euler, 12 * n);
            }
        }
    }
}
