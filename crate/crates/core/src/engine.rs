//! Symbolic equivariant Euler characteristics on split projective bundles
//! `P(f^*E)` over a Galois cover `C'`, and the Hodge classes of a
//! hypersurface `X' in |phi^* f^* L (d)|`.
//!
//! Every class is an integer combination of `[C[G]]`, `chi_G(O_C')`, `[C]`
//! and `[H^0(T)]`. The `chi_G(O_C')` coefficient is tracked in two parts:
//! terms coming from pullbacks of line bundles on `C`, and terms twisted by
//! `K_C'`, whose cohomology is the conjugate of the former by Serre duality.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repring::VirtualModule;

/// `E = O(a_1) + ... + O(a_r)` on the base, and the hypersurface class
/// `phi^* L (d)` with `deg L = ell`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSpec {
    pub degrees: Vec<i64>,
    pub ell: i64,
    pub d: i64,
    /// The restriction `H^i(P) -> H^i(X')` is an isomorphism below the
    /// middle degree and injective in it.
    pub lefschetz: bool,
}

impl BundleSpec {
    pub fn new(degrees: Vec<i64>, ell: i64, d: i64, lefschetz: bool) -> Result<Self> {
        if degrees.len() < 3 {
            return Err(Error::InvalidBundle(format!(
                "rank {} < 3; the hypersurface would not be a surface or higher",
                degrees.len()
            )));
        }
        if d < 1 {
            return Err(Error::InvalidBundle(format!(
                "fiber degree d = {d} must be positive"
            )));
        }
        Ok(BundleSpec {
            degrees,
            ell,
            d,
            lefschetz,
        })
    }

    /// `P(O + L^-2 + L^-3)` with the Weierstrass divisor in `|O(3) (x) L^6|`.
    pub fn weierstrass(n: u32) -> Self {
        let n = n as i64;
        BundleSpec {
            degrees: vec![0, -2 * n, -3 * n],
            ell: 6 * n,
            d: 3,
            lefschetz: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// Dimension of the hypersurface.
    pub fn dim(&self) -> usize {
        self.rank() - 1
    }

    pub fn det_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    /// The twist `kX'` as a sheaf term of multiplicity one.
    pub fn divisor_twist(&self, k: i64, kflag: bool) -> SheafTerm {
        SheafTerm {
            deg_c: k * self.ell,
            kflag,
            t: k * self.d,
            mult: 1,
        }
    }

    fn require_lefschetz(&self) -> Result<()> {
        if self.lefschetz {
            Ok(())
        } else {
            Err(Error::Hypothesis(
                "the bundle is not asserted to satisfy the Lefschetz restriction hypothesis".into(),
            ))
        }
    }
}

/// `mult * phi^*(f^*N (x) K^kflag) (x) O(t)` with `deg N = deg_c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafTerm {
    pub deg_c: i64,
    pub kflag: bool,
    pub t: i64,
    pub mult: i64,
}

impl SheafTerm {
    pub fn new(deg_c: i64, kflag: bool, t: i64) -> Self {
        SheafTerm {
            deg_c,
            kflag,
            t,
            mult: 1,
        }
    }
}

/// `regular [C[G]] + structure chi_G(O) + canonical chi_G(O)`, where the
/// second coefficient collects untwisted terms and the third `K`-twisted
/// ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicChi {
    pub regular: i64,
    pub structure: i64,
    pub canonical: i64,
}

impl SymbolicChi {
    pub fn new(regular: i64, structure: i64, canonical: i64) -> Self {
        SymbolicChi {
            regular,
            structure,
            canonical,
        }
    }

    /// Coefficient of `chi_G(O_C')`.
    pub fn c_o(&self) -> i64 {
        self.structure + self.canonical
    }

    /// `(cG, cO)`.
    pub fn pair(&self) -> (i64, i64) {
        (self.regular, self.c_o())
    }

    pub fn scale(self, k: i64) -> Self {
        SymbolicChi::new(self.regular * k, self.structure * k, self.canonical * k)
    }
}

impl Add for SymbolicChi {
    type Output = SymbolicChi;
    fn add(self, o: SymbolicChi) -> SymbolicChi {
        SymbolicChi::new(
            self.regular + o.regular,
            self.structure + o.structure,
            self.canonical + o.canonical,
        )
    }
}

impl Sub for SymbolicChi {
    type Output = SymbolicChi;
    fn sub(self, o: SymbolicChi) -> SymbolicChi {
        self + o.scale(-1)
    }
}

impl Neg for SymbolicChi {
    type Output = SymbolicChi;
    fn neg(self) -> SymbolicChi {
        self.scale(-1)
    }
}

/// `a [C[G]] + b chi_G(O_C') + c [C] - delta [H^0(T)]`, with
/// `b = b_structure + b_canonical`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SymbolicClass {
    pub a: i64,
    pub b_structure: i64,
    pub b_canonical: i64,
    pub c: i64,
    pub delta: i64,
}

impl SymbolicClass {
    pub fn b(&self) -> i64 {
        self.b_structure + self.b_canonical
    }

    /// `(a, b, c, delta)`.
    pub fn tuple(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b(), self.c, self.delta)
    }

    pub fn trivial(c: i64) -> Self {
        SymbolicClass {
            c,
            ..Default::default()
        }
    }

    /// `[H^0(K_C')] = [C] - chi_G(O_C')` on the `K`-twisted side.
    pub fn h0_canonical() -> Self {
        SymbolicClass {
            b_canonical: -1,
            c: 1,
            ..Default::default()
        }
    }

    pub fn from_chi(chi: SymbolicChi) -> Self {
        SymbolicClass {
            a: chi.regular,
            b_structure: chi.structure,
            b_canonical: chi.canonical,
            c: 0,
            delta: 0,
        }
    }

    pub fn scale(self, k: i64) -> Self {
        SymbolicClass {
            a: self.a * k,
            b_structure: self.b_structure * k,
            b_canonical: self.b_canonical * k,
            c: self.c * k,
            delta: self.delta * k,
        }
    }

    /// Class of the contragredient module.
    pub fn dual(self) -> Self {
        SymbolicClass {
            b_structure: self.b_canonical,
            b_canonical: self.b_structure,
            ..self
        }
    }
}

impl Add for SymbolicClass {
    type Output = SymbolicClass;
    fn add(self, o: SymbolicClass) -> SymbolicClass {
        SymbolicClass {
            a: self.a + o.a,
            b_structure: self.b_structure + o.b_structure,
            b_canonical: self.b_canonical + o.b_canonical,
            c: self.c + o.c,
            delta: self.delta + o.delta,
        }
    }
}

impl Sub for SymbolicClass {
    type Output = SymbolicClass;
    fn sub(self, o: SymbolicClass) -> SymbolicClass {
        self + o.scale(-1)
    }
}

impl Serialize for SymbolicClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SymbolicClass", 6)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b())?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("delta", &self.delta)?;
        st.serialize_field("b_structure", &self.b_structure)?;
        st.serialize_field("b_canonical", &self.b_canonical)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for SymbolicClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: i64,
            b: i64,
            c: i64,
            delta: i64,
            b_structure: i64,
            b_canonical: i64,
        }
        let r = Raw::deserialize(d)?;
        if r.b != r.b_structure + r.b_canonical {
            return Err(serde::de::Error::custom("b != b_structure + b_canonical"));
        }
        Ok(SymbolicClass {
            a: r.a,
            b_structure: r.b_structure,
            b_canonical: r.b_canonical,
            c: r.c,
            delta: r.delta,
        })
    }
}

/// Calls `visit` with the degree `sum i_j a_j` of every monomial of degree
/// `t` in the summands of `degrees`.
fn for_each_monomial(degrees: &[i64], t: i64, visit: &mut dyn FnMut(i64)) {
    fn rec(degrees: &[i64], left: i64, acc: i64, visit: &mut dyn FnMut(i64)) {
        match degrees {
            [] => {}
            [last] => visit(acc + left * last),
            [first, rest @ ..] => {
                for i in 0..=left {
                    rec(rest, left - i, acc + i * first, visit);
                }
            }
        }
    }
    if t >= 0 {
        rec(degrees, t, 0, visit);
    }
}

/// `chi_G` of `phi^*(f^*N (x) K^kflag)(t)` via `R phi_*`: `Sym^t E` for
/// `t >= 0`, nothing for `-r < t < 0`, and relative duality below.
pub fn pushforward_chi(term: SheafTerm, bundle: &BundleSpec) -> SymbolicChi {
    let r = bundle.rank() as i64;
    let (base, t, sign) = if term.t >= 0 {
        (term.deg_c, term.t, 1)
    } else if term.t > -r {
        return SymbolicChi::default();
    } else {
        // R^{r-1} phi_* O(t) = (Sym^{-t-r} E)^dual (x) det E^dual
        let sign = if (r - 1) % 2 == 0 { 1 } else { -1 };
        (term.deg_c - bundle.det_degree(), -term.t - r, sign)
    };
    let dir = if term.t >= 0 { 1 } else { -1 };
    let mut regular = 0;
    let mut count = 0;
    for_each_monomial(&bundle.degrees, t, &mut |deg| {
        regular += base + dir * deg;
        count += 1;
    });
    let sign = sign * term.mult;
    let (structure, canonical) = if term.kflag { (0, -count) } else { (count, 0) };
    SymbolicChi::new(regular, structure, canonical).scale(sign)
}

/// Degrees of the summands of `wedge^t E`.
pub fn wedge_degrees(bundle: &BundleSpec, t: usize) -> Result<Vec<i64>> {
    let r = bundle.rank();
    if t > r {
        return Err(Error::InvalidBundle(format!(
            "wedge power {t} exceeds rank {r}"
        )));
    }
    let mut out = Vec::new();
    fn rec(deg: &[i64], start: usize, left: usize, acc: i64, out: &mut Vec<i64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..deg.len() {
            rec(deg, i + 1, left - 1, acc + deg[i], out);
        }
    }
    rec(&bundle.degrees, 0, t, 0, &mut out);
    Ok(out)
}

/// `chi_G(Omega^t_phi (x) Z)` for the twist `Z = phi^*(f^*N (x) K^kflag)(s)`
/// given as a sheaf term, from
/// `0 -> Omega^t_phi -> wedge^t(phi^* E)(-t) -> Omega^{t-1}_phi -> 0`.
pub fn chi_omega_vertical(t: usize, twist: SheafTerm, bundle: &BundleSpec) -> Result<SymbolicChi> {
    if t >= bundle.rank() {
        return Err(Error::InvalidBundle(format!(
            "relative forms of degree {t} on a P^{}-bundle",
            bundle.rank() - 1
        )));
    }
    let mut acc = pushforward_chi(twist, bundle);
    for k in 1..=t {
        let mut wedge = SymbolicChi::default();
        for deg in wedge_degrees(bundle, k)? {
            let term = SheafTerm {
                deg_c: twist.deg_c + deg,
                t: twist.t - k as i64,
                ..twist
            };
            wedge = wedge + pushforward_chi(term, bundle);
        }
        acc = wedge - acc;
    }
    Ok(acc)
}

/// `chi_G(Omega^t_P(kX'))` from
/// `0 -> phi^*K (x) Omega^{t-1}_phi -> Omega^t_P -> Omega^t_phi -> 0`.
pub fn chi_omega_total(t: i64, k: i64, bundle: &BundleSpec) -> Result<SymbolicChi> {
    let r = bundle.rank() as i64;
    if t < 0 || t > r {
        return Ok(SymbolicChi::default());
    }
    if t == r {
        // K_P = phi^*(det E (x) K)(-r)
        let term = SheafTerm::new(bundle.det_degree() + k * bundle.ell, true, k * bundle.d - r);
        return Ok(pushforward_chi(term, bundle));
    }
    let vertical = chi_omega_vertical(t as usize, bundle.divisor_twist(k, false), bundle)?;
    if t == 0 {
        return Ok(vertical);
    }
    let horizontal = chi_omega_vertical((t - 1) as usize, bundle.divisor_twist(k, true), bundle)?;
    Ok(horizontal + vertical)
}

/// `[H^{p,q}(P(f^*E))]`.
pub fn hodge_of_bundle(p: usize, q: usize, bundle: &BundleSpec) -> Result<SymbolicClass> {
    let r = bundle.rank();
    if p > r || q > r {
        return Err(Error::InvalidBundle(format!(
            "(p, q) = ({p}, {q}) outside the diamond of a {r}-fold"
        )));
    }
    Ok(if p == q {
        SymbolicClass::trivial(if p == 0 || p == r { 1 } else { 2 })
    } else if p == q + 1 && q < r {
        SymbolicClass::h0_canonical()
    } else if q == p + 1 && p < r {
        SymbolicClass::h0_canonical().dual()
    } else {
        SymbolicClass::default()
    })
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The alternating sums `sum_{k=1}^{n-p+1} (-1)^{k-1} chi(Omega^{p+k}(kX'))
/// + sum_{k=1}^{n-p} (-1)^{k-1} chi(Omega^{p+1+k}(kX'))`.
fn middle_sum(p: usize, bundle: &BundleSpec) -> Result<SymbolicChi> {
    let n = bundle.dim();
    let mut acc = SymbolicChi::default();
    for k in 1..=n - p + 1 {
        let term = chi_omega_total((p + k) as i64, k as i64, bundle)?;
        acc = acc + term.scale(sign(k - 1));
    }
    for k in 1..=n - p {
        let term = chi_omega_total((p + 1 + k) as i64, k as i64, bundle)?;
        acc = acc + term.scale(sign(k - 1));
    }
    Ok(acc)
}

/// `[H^{1,1}]` of the singular Weierstrass-type surface `W'` (rank 3):
/// `2[C] - chi(Omega^2(W')) + chi(K_P(2W')) - chi(K_P(W')) - [H^0(T)]`.
pub fn hodge_singular_surface(bundle: &BundleSpec) -> Result<SymbolicClass> {
    if bundle.rank() != 3 {
        return Err(Error::InvalidBundle(
            "the singular-surface formula needs a rank-3 bundle".into(),
        ));
    }
    bundle.require_lefschetz()?;
    let chi = chi_omega_total(3, 2, bundle)?
        - chi_omega_total(2, 1, bundle)?
        - chi_omega_total(3, 1, bundle)?;
    Ok(SymbolicClass {
        delta: 1,
        ..SymbolicClass::trivial(2) + SymbolicClass::from_chi(chi)
    })
}

/// `[H^{p, n-p}(X')]`, `n = dim X'`. With `singular`, the `(1,1)` slot of a
/// rank-3 bundle is that of the singular model and carries `delta = 1`.
pub fn hodge_middle(p: usize, bundle: &BundleSpec, singular: bool) -> Result<SymbolicClass> {
    bundle.require_lefschetz()?;
    let n = bundle.dim();
    if p > n {
        return Err(Error::InvalidBundle(format!(
            "p = {p} exceeds dim X' = {n}"
        )));
    }
    if singular && bundle.rank() != 3 {
        return Err(Error::InvalidBundle(
            "singular models are supported for surfaces only".into(),
        ));
    }
    let sum = SymbolicClass::from_chi(middle_sum(p, bundle)?);
    let smooth = if p == 0 {
        // [H^0(K)] - [C] + (-1)^n [H^{0,n}] = sum
        (sum - SymbolicClass::h0_canonical() + SymbolicClass::trivial(1)).scale(sign(n))
    } else {
        hodge_of_bundle(p, n - p, bundle)? + sum.scale(sign(n - p))
    };
    if singular && p == 1 {
        let w = hodge_singular_surface(bundle)?;
        if (SymbolicClass { delta: 0, ..w }) != smooth {
            return Err(Error::Internal(format!(
                "singular-surface formula {w:?} disagrees with the general one {smooth:?}"
            )));
        }
        return Ok(w);
    }
    Ok(smooth)
}

/// All `[H^{p,q}(X')]`, indexed `[p][q]`.
pub fn full_diamond(bundle: &BundleSpec, singular: bool) -> Result<Vec<Vec<SymbolicClass>>> {
    bundle.require_lefschetz()?;
    let n = bundle.dim();
    (0..=n)
        .map(|p| {
            (0..=n)
                .map(|q| {
                    if p + q < n {
                        hodge_of_bundle(p, q, bundle)
                    } else if p + q == n {
                        hodge_middle(p, bundle, singular)
                    } else {
                        Ok(hodge_of_bundle(n - p, n - q, bundle)?.dual())
                    }
                })
                .collect()
        })
        .collect()
}

/// Substitutes modules for the symbols: `chi_O = [C] - h0_k` on the
/// `K`-twisted side, its conjugate on the untwisted side.
pub fn evaluate(
    class: &SymbolicClass,
    h0_k: &VirtualModule,
    tjurina: Option<&VirtualModule>,
) -> Result<VirtualModule> {
    let table = h0_k.table();
    let reg = VirtualModule::regular(table);
    let triv = VirtualModule::trivial(table);
    let chi_o = &triv - h0_k;
    let mut out = &(&reg.scale(class.a) + &chi_o.dual().scale(class.b_structure))
        + &(&chi_o.scale(class.b_canonical) + &triv.scale(class.c));
    if class.delta != 0 {
        let t = tjurina.ok_or(Error::TjurinaUnavailable)?;
        out = &out - &t.scale(class.delta);
    }
    Ok(out)
}
