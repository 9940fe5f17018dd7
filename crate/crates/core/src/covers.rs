//! Galois covers `C' -> C` of curves: Riemann–Hurwitz, inertia data and the
//! classes `[H^0(O_Z)]`, `[H^0(K_C')]`, `chi_G(O_C')` in `K(C[G])`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Place, Point, Poly};
use crate::repring::{CharacterTable, VirtualModule};

/// Where a cover branches: a set of places of `P^1`, or an opaque label on
/// a base curve without coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Locus {
    Place(Place),
    Label(String),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Place(p) => write!(f, "{p}"),
            Locus::Label(l) => write!(f, "{l}"),
        }
    }
}

/// A point given by the user for an abstract cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchPoint {
    Point(Point),
    Label(String),
}

impl BranchPoint {
    pub fn parse(s: &str) -> Self {
        match Point::parse(s) {
            Ok(p) => BranchPoint::Point(p),
            Err(_) => BranchPoint::Label(s.trim().to_string()),
        }
    }
}

/// Branch places sharing one inertia generator.
///
/// The generator acts on a local uniformizer at a chosen point above each
/// place by multiplication with `exp(2 pi i / e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchLocus {
    pub locus: Locus,
    /// Number of geometric branch points in the locus.
    pub count: u32,
    pub inertia: usize,
    pub e: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverKind {
    /// `y^m = f(t)` over `P^1` with `y -> exp(2 pi i/m) y`.
    Superelliptic {
        m: u32,
        f: Poly,
    },
    Abstract,
}

#[derive(Debug, Clone)]
pub struct Cover {
    table: Arc<CharacterTable>,
    base_genus: u32,
    kind: CoverKind,
    branches: Vec<BranchLocus>,
}

impl Cover {
    pub fn superelliptic(m: u32, f: Poly) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidCover(format!("m = {m} must be at least 2")));
        }
        let d = match f.degree() {
            Some(d) if d >= 1 => d as u32,
            _ => return Err(Error::InvalidCover("f must be non-constant".into())),
        };
        if !f.is_squarefree() {
            return Err(Error::InvalidCover(format!("f = {f} is not squarefree")));
        }
        let table = Arc::new(CharacterTable::cyclic(m as usize)?);
        let mut branches = vec![BranchLocus {
            locus: Locus::Place(Place::Finite(f.monic())),
            count: d,
            inertia: 1,
            e: m,
        }];
        let g0 = num_integer::gcd(m, d);
        if g0 != m {
            branches.push(BranchLocus {
                locus: Locus::Place(Place::Infinity),
                count: 1,
                inertia: ((m - d % m) % m) as usize,
                e: m / g0,
            });
        }
        let cover = Cover {
            table,
            base_genus: 0,
            kind: CoverKind::Superelliptic { m, f },
            branches,
        };
        cover.genus_up()?;
        Ok(cover)
    }

    /// Cover given by group, base genus and inertia generators.
    pub fn abstract_cover(
        table: Arc<CharacterTable>,
        base_genus: u32,
        branch: Vec<(BranchPoint, usize)>,
    ) -> Result<Self> {
        let group = table.group();
        let mut branches: Vec<BranchLocus> = Vec::with_capacity(branch.len());
        for (point, gen) in branch {
            if gen >= group.order() {
                return Err(Error::InvalidCover(format!(
                    "inertia generator {gen} is not an element of G"
                )));
            }
            if gen == group.identity() {
                return Err(Error::InvalidCover(format!(
                    "inertia generator at {point:?} is the identity"
                )));
            }
            let locus = match point {
                BranchPoint::Point(Point::Rational(c)) => {
                    Locus::Place(Place::Finite(Poly::linear(&c)))
                }
                BranchPoint::Point(Point::Infinity) => Locus::Place(Place::Infinity),
                BranchPoint::Label(l) => Locus::Label(l),
            };
            if branches.iter().any(|b| b.locus == locus) {
                return Err(Error::InvalidCover(format!(
                    "branch point {locus} listed twice"
                )));
            }
            branches.push(BranchLocus {
                locus,
                count: 1,
                inertia: gen,
                e: group.element_order(gen) as u32,
            });
        }
        if base_genus == 0 {
            let gens: Vec<usize> = branches.iter().map(|b| b.inertia).collect();
            if generated_subgroup_order(&table, &gens) != group.order() {
                return Err(Error::InvalidCover(
                    "inertia generators do not generate G, so the cover of P^1 is disconnected"
                        .into(),
                ));
            }
        }
        let cover = Cover {
            table,
            base_genus,
            kind: CoverKind::Abstract,
            branches,
        };
        cover.genus_up()?;
        Ok(cover)
    }

    /// The identity cover of `P^1`.
    pub fn trivial() -> Self {
        Self::trivial_over(0)
    }

    /// The identity cover of a curve of genus `g`.
    pub fn trivial_over(g: u32) -> Self {
        Cover {
            table: Arc::new(CharacterTable::trivial_group()),
            base_genus: g,
            kind: CoverKind::Abstract,
            branches: vec![],
        }
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn kind(&self) -> &CoverKind {
        &self.kind
    }

    pub fn base_genus(&self) -> u32 {
        self.base_genus
    }

    pub fn group_order(&self) -> u32 {
        self.table.group().order() as u32
    }

    pub fn branches(&self) -> &[BranchLocus] {
        &self.branches
    }

    /// Number of geometric branch points.
    pub fn branch_count(&self) -> u32 {
        self.branches.iter().map(|b| b.count).sum()
    }

    pub fn is_ramified(&self) -> bool {
        !self.branches.is_empty()
    }

    /// `2g' - 2 = |G|(2g - 2) + sum (|G|/e)(e - 1)`.
    pub fn genus_up(&self) -> Result<u32> {
        let order = self.group_order() as i64;
        let mut twice = order * (2 * self.base_genus as i64 - 2);
        for b in &self.branches {
            let e = b.e as i64;
            if order % e != 0 {
                return Err(Error::InvalidCover(format!(
                    "ramification index {e} does not divide |G| = {order}"
                )));
            }
            twice += b.count as i64 * (order / e) * (e - 1);
        }
        if twice % 2 != 0 || twice < -2 {
            return Err(Error::InvalidCover(format!(
                "Riemann-Hurwitz gives 2g' - 2 = {twice}"
            )));
        }
        Ok(((twice + 2) / 2) as u32)
    }

    /// `[H^0(O_Z)]`, the permutation module on the ramification points.
    pub fn h0_oz(&self) -> Result<VirtualModule> {
        let mut acc = VirtualModule::zero(&self.table);
        for b in &self.branches {
            let ind = VirtualModule::induced_trivial(&self.table, b.inertia)?;
            acc = &acc + &ind.scale(b.count as i64);
        }
        Ok(acc)
    }

    /// `2[C] + (2g - 2 + s)[C[G]] - [H^0(O_Z)]`, which equals
    /// `[H^0(K)] + dual [H^0(K)]` for a ramified cover.
    pub fn canonical_real_form(&self) -> Result<VirtualModule> {
        let reg = VirtualModule::regular(&self.table);
        let triv = VirtualModule::trivial(&self.table);
        let k = 2 * self.base_genus as i64 - 2 + self.branch_count() as i64;
        Ok(&(&triv.scale(2) + &reg.scale(k)) - &self.h0_oz()?)
    }

    /// Halving of [`Cover::canonical_real_form`]; equals `[H^0(K)]` when the
    /// canonical class is self-dual.
    pub fn h0_canonical_by_halving(&self) -> Result<VirtualModule> {
        if !self.is_ramified() {
            return Ok(self.unramified_canonical());
        }
        self.canonical_real_form()?.halve()
    }

    fn unramified_canonical(&self) -> VirtualModule {
        let reg = VirtualModule::regular(&self.table);
        let triv = VirtualModule::trivial(&self.table);
        &triv + &reg.scale(self.base_genus as i64 - 1)
    }

    /// `[H^0(C', K)]` from the holomorphic Lefschetz fixed-point formula.
    pub fn h0_canonical(&self) -> Result<VirtualModule> {
        let group = self.table.group();
        let genus = self.genus_up()?;
        let chars: Vec<Complex64> = (0..group.order())
            .map(|h| {
                if h == group.identity() {
                    return Complex64::new(genus as f64, 0.0);
                }
                let mut tr = Complex64::new(1.0, 0.0);
                for b in &self.branches {
                    let e = b.e as usize;
                    let powers: Vec<usize> = (0..e).map(|k| group.pow(b.inertia, k)).collect();
                    let mut local = Complex64::zero();
                    for x in 0..group.order() {
                        let c = group.conjugate(x, h);
                        if let Some(k) = powers.iter().position(|&p| p == c) {
                            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / e as f64);
                            local += z / (Complex64::new(1.0, 0.0) - z);
                        }
                    }
                    tr += local * (b.count as f64 / e as f64);
                }
                tr
            })
            .collect();
        let h0k = VirtualModule::new(self.table.clone(), self.table.decompose(&chars)?);
        if !h0k.is_effective() || h0k.dimension() != genus as i64 {
            return Err(Error::Internal(format!(
                "holomorphic forms {h0k:?} are not a module of dimension {genus}"
            )));
        }
        if self.is_ramified() {
            if &h0k + &h0k.dual() != self.canonical_real_form()? {
                return Err(Error::Internal(
                    "H^0(K) + its dual differs from 2[C] + (2g-2+s)[C[G]] - [H^0(O_Z)]".into(),
                ));
            }
            if self.table.is_real() && self.h0_canonical_by_halving()? != h0k {
                return Err(Error::Internal(
                    "halving disagrees with the trace formula".into(),
                ));
            }
        } else if h0k != self.unramified_canonical() {
            return Err(Error::Internal(
                "unramified cover with H^0(K) != [C] + (g-1)[C[G]]".into(),
            ));
        }
        Ok(h0k)
    }

    /// `chi_G(O_C') = [C] - [H^0(K)]`.
    pub fn chi_o(&self) -> Result<VirtualModule> {
        Ok(&VirtualModule::trivial(&self.table) - &self.h0_canonical()?)
    }

    pub fn report(&self) -> Result<CoverReport> {
        let h0_k = self.h0_canonical()?;
        Ok(CoverReport {
            genus_up: self.genus_up()?,
            s: self.branch_count(),
            h0_oz: self.h0_oz()?,
            chi_o: &VirtualModule::trivial(&self.table) - &h0_k,
            h0_k,
        })
    }
}

fn generated_subgroup_order(table: &CharacterTable, gens: &[usize]) -> usize {
    let g = table.group();
    let mut members = vec![g.identity()];
    let mut i = 0;
    while i < members.len() {
        for &s in gens {
            let x = g.mul(members[i], s);
            if !members.contains(&x) {
                members.push(x);
            }
        }
        i += 1;
    }
    members.len()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverReport {
    pub genus_up: u32,
    pub s: u32,
    pub h0_oz: VirtualModule,
    pub h0_k: VirtualModule,
    pub chi_o: VirtualModule,
}

/// Basis of holomorphic differentials `t^i y^{-j} dt` on `y^m = f(t)`,
/// returned as the `Z/m`-module they span (`y -> zeta y` pulls
/// `t^i y^{-j} dt` back to `zeta^{-j}` times itself).
pub fn superelliptic_differentials_oracle(m: u32, f: &Poly) -> Result<VirtualModule> {
    let cover = Cover::superelliptic(m, f.clone())?;
    let genus = cover.genus_up()?;
    let d = f.degree().unwrap() as i64;
    let m_i = m as i64;
    let g0 = num_integer::gcd(m_i, d);
    let e_inf = m_i / g0;
    let zero_is_root = f.eval(&Zero::zero()).is_zero();
    let mut mult = vec![0i64; m as usize];
    let mut count = 0u32;
    for j in 1..m_i {
        for i in 0..=d {
            // order at a point above a root of f, other than 0
            let at_root = m_i - 1 - j;
            // order at each point above t = 0
            let at_zero = if zero_is_root {
                m_i * i + m_i - 1 - j
            } else {
                i
            };
            let at_inf = -e_inf * i + j * d / g0 - e_inf - 1;
            let roots_elsewhere = d - zero_is_root as i64;
            let orders_ok = at_zero >= 0 && at_inf >= 0 && (roots_elsewhere == 0 || at_root >= 0);
            if !orders_ok {
                continue;
            }
            let zero_points = if zero_is_root { 1 } else { m_i };
            let divisor_degree = roots_elsewhere * at_root + zero_points * at_zero + g0 * at_inf;
            if divisor_degree != 2 * genus as i64 - 2 {
                return Err(Error::Internal(format!(
                    "divisor of t^{i} y^-{j} dt has degree {divisor_degree}"
                )));
            }
            mult[((m_i - j) % m_i) as usize] += 1;
            count += 1;
        }
    }
    if count != genus {
        return Err(Error::Internal(format!(
            "found {count} holomorphic forms on a curve of genus {genus}"
        )));
    }
    Ok(VirtualModule::new(cover.table().clone(), mult))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn se(m: u32, roots: &[i64]) -> Cover {
        Cover::superelliptic(m, Poly::from_roots(roots)).unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(se(2, &[0, 1]).genus_up().unwrap(), 0);
        assert_eq!(se(2, &[0, 1, 2, 3]).genus_up().unwrap(), 1);
        let z3 = Arc::new(CharacterTable::cyclic(3).unwrap());
        let c = Cover::abstract_cover(
            z3,
            0,
            vec![
                (BranchPoint::parse("0"), 1),
                (BranchPoint::parse("1"), 1),
                (BranchPoint::parse("inf"), 1),
            ],
        )
        .unwrap();
        assert_eq!(c.genus_up().unwrap(), 1);
        assert_eq!(c.h0_canonical().unwrap().multiplicities(), &[0, 1, 0]);
    }

    #[test]
    fn superelliptic_infinity_inertia() {
        let c = se(3, &[0, 1]);
        assert_eq!(c.branches().len(), 2);
        assert_eq!(c.branches()[1].inertia, 1);
        assert_eq!(c.branches()[1].e, 3);
        let c = se(4, &[0, 1, 2, 3, 4, 5]);
        assert_eq!(c.branches()[1].inertia, 2);
        assert_eq!(c.branches()[1].e, 2);
        assert_eq!(se(2, &[0, 1, 2, 3]).branches().len(), 1);
    }

    #[test]
    fn h0_oz_examples() {
        let c = se(2, &[0, 1]);
        assert_eq!(c.h0_oz().unwrap().multiplicities(), &[2, 0]);
        let c = se(2, &[0, 1, 2, 3]);
        assert_eq!(c.h0_oz().unwrap().multiplicities(), &[4, 0]);
        // Z/4 with inertia <g^2> at one point and <g> at two others
        let z4 = Arc::new(CharacterTable::cyclic(4).unwrap());
        let c = Cover::abstract_cover(
            z4,
            0,
            vec![
                (BranchPoint::parse("0"), 2),
                (BranchPoint::parse("1"), 1),
                (BranchPoint::parse("2"), 1),
            ],
        )
        .unwrap();
        let oz = c.h0_oz().unwrap();
        assert_eq!(oz.multiplicities(), &[3, 0, 1, 0]);
        assert_eq!(oz.dimension(), 2 + 1 + 1);
    }

    #[test]
    fn h0_canonical_examples() {
        assert!(se(2, &[0, 1]).h0_canonical().unwrap().is_zero());
        let c = se(2, &[0, 1, 2, 3]);
        assert_eq!(c.h0_canonical().unwrap().multiplicities(), &[0, 1]);
        assert_eq!(c.chi_o().unwrap().multiplicities(), &[1, -1]);
        assert_eq!(
            c.h0_canonical_by_halving().unwrap().multiplicities(),
            &[0, 1]
        );
        // unramified Z/3 over genus 2
        let z3 = Arc::new(CharacterTable::cyclic(3).unwrap());
        let c = Cover::abstract_cover(z3, 2, vec![]).unwrap();
        assert_eq!(c.genus_up().unwrap(), 4);
        assert_eq!(c.h0_canonical().unwrap().multiplicities(), &[2, 1, 1]);
        assert_eq!(
            Cover::trivial_over(3).chi_o().unwrap().multiplicities(),
            &[-2]
        );
        assert_eq!(se(2, &[0, 1]).chi_o().unwrap().multiplicities(), &[1, 0]);
    }

    /// For Z/3 the halving shortcut cannot see which of the two conjugate
    /// characters carries the forms.
    #[test]
    fn halving_fails_for_complex_characters() {
        let c = se(3, &[0, 1]);
        assert_eq!(
            c.canonical_real_form().unwrap().multiplicities(),
            &[0, 1, 1]
        );
        assert!(c.h0_canonical_by_halving().is_err());
        assert_eq!(c.h0_canonical().unwrap().multiplicities(), &[0, 1, 0]);
    }

    #[test]
    fn oracle_examples() {
        let f = Poly::from_roots(&[0, 1, 2, 3]);
        assert_eq!(
            superelliptic_differentials_oracle(2, &f)
                .unwrap()
                .multiplicities(),
            &[0, 1]
        );
        assert!(
            superelliptic_differentials_oracle(2, &Poly::from_roots(&[0, 1]))
                .unwrap()
                .is_zero()
        );
        let f = Poly::from_roots(&[0, 1]);
        assert_eq!(
            superelliptic_differentials_oracle(3, &f).unwrap(),
            se(3, &[0, 1]).h0_canonical().unwrap()
        );
    }

    #[test]
    fn oracle_sweep() {
        let root_sets: &[&[i64]] = &[
            &[0, 1],
            &[0, 1, 2],
            &[1, 2, 3],
            &[-1, 0, 1, 2],
            &[-2, -1, 1, 3, 4],
            &[0, 1, 2, 3, 4, 5],
            &[-3, -1, 0, 2, 5, 6, 7],
            &[-4, -3, -2, -1, 1, 2, 3, 4],
        ];
        for m in 2..=6 {
            for roots in root_sets {
                let f = Poly::from_roots(roots);
                let oracle = superelliptic_differentials_oracle(m, &f).unwrap();
                let lefschetz = se(m, roots).h0_canonical().unwrap();
                assert_eq!(oracle, lefschetz, "m = {m}, roots {roots:?}");
            }
        }
    }

    #[test]
    fn dihedral_cover() {
        // D_3 over P^1 branched at three points: two reflections and a rotation
        let d3 = Arc::new(CharacterTable::dihedral(3).unwrap());
        let c = Cover::abstract_cover(
            d3.clone(),
            0,
            vec![
                (BranchPoint::parse("0"), 3),
                (BranchPoint::parse("1"), 4),
                (BranchPoint::parse("inf"), 1),
            ],
        )
        .unwrap();
        // 2g' - 2 = 6(-2) + 3*1 + 3*1 + 2*2 = -2
        assert_eq!(c.genus_up().unwrap(), 0);
        assert!(c.h0_canonical().unwrap().is_zero());
        let not_generating = Cover::abstract_cover(
            d3,
            0,
            vec![(BranchPoint::parse("0"), 1), (BranchPoint::parse("1"), 2)],
        );
        assert!(matches!(not_generating, Err(Error::InvalidCover(_))));
    }

    #[test]
    fn rejects_bad_covers() {
        assert!(Cover::superelliptic(2, Poly::from_i64s(&[0, 0, 1])).is_err());
        assert!(Cover::superelliptic(1, Poly::from_roots(&[0, 1])).is_err());
        let z2 = Arc::new(CharacterTable::cyclic(2).unwrap());
        // odd number of branch points for a double cover of P^1
        assert!(Cover::abstract_cover(
            z2.clone(),
            0,
            vec![
                (BranchPoint::parse("0"), 1),
                (BranchPoint::parse("1"), 1),
                (BranchPoint::parse("2"), 1)
            ]
        )
        .is_err());
        assert!(Cover::abstract_cover(z2.clone(), 0, vec![(BranchPoint::parse("0"), 0)]).is_err());
        assert!(Cover::abstract_cover(
            z2,
            0,
            vec![(BranchPoint::parse("0"), 1), (BranchPoint::parse("0"), 1)]
        )
        .is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn chi_o_dimension_and_oz_degree(
                m in 2u32..=6,
                roots in prop::collection::btree_set(-6i64..=6, 1..=6),
            ) {
                let roots: Vec<i64> = roots.into_iter().collect();
                let c = se(m, &roots);
                let g = c.genus_up().unwrap() as i64;
                prop_assert_eq!(c.chi_o().unwrap().dimension(), 1 - g);
                let order = m as i64;
                let preimages: i64 = c.branches().iter()
                    .map(|b| b.count as i64 * order / b.e as i64).sum();
                prop_assert_eq!(c.h0_oz().unwrap().dimension(), preimages);
                // deg f^*K_C(R) - deg K_C' = #f^{-1}(R)
                let s = c.branch_count() as i64;
                prop_assert_eq!(order * (-2 + s) - (2 * g - 2), preimages);
            }
        }
    }
}
