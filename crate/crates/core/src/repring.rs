//! Finite groups given by Cayley tables, their character tables, and exact
//! arithmetic in the representation ring `K(C[G])`.
//!
//! Character values are complex floating point numbers; every multiplicity
//! derived from them is rounded to the nearest integer and the rounding
//! residual is checked against [`MULTIPLICITY_TOLERANCE`].

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for the row-orthogonality check of a character table.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;
/// Maximum distance from an integer tolerated for a computed multiplicity.
pub const MULTIPLICITY_TOLERANCE: f64 = 1e-6;

/// A finite group presented by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major: `table[a * order + b] = a * b`.
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a Cayley table, checking the group axioms.
    pub fn from_cayley(rows: &[Vec<usize>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {}, expected {order}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= order {
                    return Err(Error::InvalidGroup(format!(
                        "entry {x} in row {i} is out of range"
                    )));
                }
                table.push(x);
            }
        }
        Self::from_flat(order, table)
    }

    fn from_flat(order: usize, table: Vec<usize>) -> Result<Self> {
        let mul = |a: usize, b: usize| table[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; order];
        for (a, slot) in inverse.iter_mut().enumerate() {
            let inv: Vec<usize> = (0..order)
                .filter(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .collect();
            if inv.len() != 1 {
                return Err(Error::InvalidGroup(format!(
                    "element {a} has {} two-sided inverses",
                    inv.len()
                )));
            }
            *slot = inv[0];
        }
        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails for ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverse,
        })
    }

    /// The cyclic group `Z/m`; element `k` is `g^k`.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let table = (0..m * m).map(|i| (i / m + i % m) % m).collect();
        Self::from_flat(m, table)
    }

    /// The dihedral group of order `2m`; element `k < m` is `r^k` and element
    /// `m + k` is `s r^k`.
    pub fn dihedral(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidGroup("dihedral group needs m >= 1".into()));
        }
        let order = 2 * m;
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let (f1, k1) = (a / m, a % m);
                let (f2, k2) = (b / m, b % m);
                let (f, k) = if f2 == 0 {
                    (f1, (k1 + k2) % m)
                } else {
                    ((f1 + 1) % 2, (k2 + m - k1) % m)
                };
                table.push(f * m + k);
            }
        }
        Self::from_flat(order, table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn conjugate(&self, x: usize, h: usize) -> usize {
        // x^{-1} h x
        self.mul(self.mul(self.inverse(x), h), x)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes; the class of the identity comes first and each
    /// class is sorted.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        let mut reps = vec![self.identity];
        reps.extend((0..self.order).filter(|&a| a != self.identity));
        for h in reps {
            if seen[h] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order).map(|x| self.conjugate(x, h)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Multiplication table as nested rows.
    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }
}

/// Structure hint used to pick a built-in character table.
#[derive(Debug, Clone, PartialEq)]
pub enum TableHint {
    Cyclic(usize),
    Dihedral(usize),
    /// Rows are characters, columns are group elements.
    User(Vec<Vec<Complex64>>),
}

/// Complete table of irreducible characters.
///
/// Row 0 is always the trivial character.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    group: FiniteGroup,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// `values[i][c]`: character `i` on class `c`.
    values: Vec<Vec<Complex64>>,
    dims: Vec<i64>,
    dual_index: Vec<usize>,
}

fn root_of_unity(k: i64, m: usize) -> Complex64 {
    let angle = 2.0 * PI * (k.rem_euclid(m as i64) as f64) / m as f64;
    Complex64::from_polar(1.0, angle)
}

impl CharacterTable {
    pub fn new(group: FiniteGroup, hint: TableHint) -> Result<Self> {
        let elementwise: Vec<Vec<Complex64>> = match hint {
            TableHint::Cyclic(m) => {
                if group != FiniteGroup::cyclic(m)? {
                    return Err(Error::InvalidGroup(format!(
                        "multiplication table is not the standard table of Z/{m}"
                    )));
                }
                (0..m)
                    .map(|j| (0..m).map(|k| root_of_unity((j * k) as i64, m)).collect())
                    .collect()
            }
            TableHint::Dihedral(m) => {
                if group != FiniteGroup::dihedral(m)? {
                    return Err(Error::InvalidGroup(format!(
                        "multiplication table is not the standard table of D_{m}"
                    )));
                }
                dihedral_characters(m)
            }
            TableHint::User(rows) => rows,
        };
        Self::from_elementwise(group, elementwise)
    }

    pub fn cyclic(m: usize) -> Result<Self> {
        Self::new(FiniteGroup::cyclic(m)?, TableHint::Cyclic(m))
    }

    pub fn dihedral(m: usize) -> Result<Self> {
        Self::new(FiniteGroup::dihedral(m)?, TableHint::Dihedral(m))
    }

    pub fn trivial_group() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    fn from_elementwise(group: FiniteGroup, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let order = group.order();
        let classes = group.conjugacy_classes();
        let mut class_of = vec![0; order];
        for (c, class) in classes.iter().enumerate() {
            for &x in class {
                class_of[x] = c;
            }
        }
        if rows.len() != classes.len() {
            return Err(Error::CharacterTable(format!(
                "{} characters supplied but the group has {} conjugacy classes",
                rows.len(),
                classes.len()
            )));
        }
        let mut values = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::CharacterTable(format!(
                    "character {i} has {} values, expected {order}",
                    row.len()
                )));
            }
            let mut per_class = Vec::with_capacity(classes.len());
            for class in &classes {
                let v = row[class[0]];
                if class
                    .iter()
                    .any(|&x| (row[x] - v).norm() > ORTHOGONALITY_TOLERANCE)
                {
                    return Err(Error::CharacterTable(format!(
                        "character {i} is not constant on conjugacy classes"
                    )));
                }
                per_class.push(v);
            }
            values.push(per_class);
        }
        let id_class = class_of[group.identity()];
        if values[0]
            .iter()
            .any(|v| (v - Complex64::new(1.0, 0.0)).norm() > ORTHOGONALITY_TOLERANCE)
        {
            return Err(Error::CharacterTable(
                "row 0 must be the trivial character".into(),
            ));
        }
        let mut dims = Vec::with_capacity(values.len());
        for (i, row) in values.iter().enumerate() {
            let d = row[id_class];
            let r = d.re.round();
            if (d - Complex64::new(r, 0.0)).norm() > MULTIPLICITY_TOLERANCE || r < 1.0 {
                return Err(Error::CharacterTable(format!(
                    "character {i} has non-integral degree {d}"
                )));
            }
            dims.push(r as i64);
        }
        let sizes: Vec<f64> = classes.iter().map(|c| c.len() as f64).collect();
        for i in 0..values.len() {
            for j in 0..values.len() {
                let ip: Complex64 = (0..classes.len())
                    .map(|c| values[i][c] * values[j][c].conj() * sizes[c])
                    .sum::<Complex64>()
                    / order as f64;
                let expected = if i == j { 1.0 } else { 0.0 };
                if (ip - Complex64::new(expected, 0.0)).norm() > ORTHOGONALITY_TOLERANCE {
                    return Err(Error::CharacterTable(format!(
                        "<chi_{i}, chi_{j}> = {ip}, expected {expected}"
                    )));
                }
            }
        }
        let dim_sq: i64 = dims.iter().map(|d| d * d).sum();
        if dim_sq != order as i64 {
            return Err(Error::CharacterTable(format!(
                "sum of squared degrees is {dim_sq}, group order is {order}"
            )));
        }
        let mut dual_index = Vec::with_capacity(values.len());
        for row in &values {
            let j = values
                .iter()
                .position(|other| {
                    other
                        .iter()
                        .zip(row)
                        .all(|(a, b)| (a - b.conj()).norm() < 1e-6)
                })
                .ok_or_else(|| {
                    Error::CharacterTable("table is not closed under conjugation".into())
                })?;
            dual_index.push(j);
        }
        Ok(CharacterTable {
            group,
            classes,
            class_of,
            values,
            dims,
            dual_index,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn num_characters(&self) -> usize {
        self.values.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn dims(&self) -> &[i64] {
        &self.dims
    }

    /// Value of character `i` at group element `x`.
    pub fn value(&self, i: usize, x: usize) -> Complex64 {
        self.values[i][self.class_of[x]]
    }

    pub fn class_values(&self, i: usize) -> &[Complex64] {
        &self.values[i]
    }

    /// Index of the complex-conjugate character.
    pub fn dual_index(&self, i: usize) -> usize {
        self.dual_index[i]
    }

    /// True when every character is real-valued (every module is self-dual).
    pub fn is_real(&self) -> bool {
        self.dual_index.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Same group law and the same characters in the same order.
    pub fn same_as(&self, other: &CharacterTable) -> bool {
        self.group == other.group
            && self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| {
                a.iter()
                    .zip(b)
                    .all(|(x, y)| (x - y).norm() < ORTHOGONALITY_TOLERANCE)
            })
    }

    /// Decomposes a class function given by its values on each group element.
    pub fn decompose(&self, f: &[Complex64]) -> Result<Vec<i64>> {
        let order = self.group.order() as f64;
        (0..self.num_characters())
            .map(|i| {
                let ip: Complex64 = f
                    .iter()
                    .enumerate()
                    .map(|(x, &fx)| fx * self.value(i, x).conj())
                    .sum::<Complex64>()
                    / order;
                round_multiplicity(i, ip)
            })
            .collect()
    }
}

fn round_multiplicity(index: usize, z: Complex64) -> Result<i64> {
    let r = z.re.round();
    let residual = (z - Complex64::new(r, 0.0)).norm();
    if residual > MULTIPLICITY_TOLERANCE {
        return Err(Error::NonIntegral {
            index,
            value: z.re,
            residual,
        });
    }
    Ok(r as i64)
}

fn dihedral_characters(m: usize) -> Vec<Vec<Complex64>> {
    let order = 2 * m;
    let one = Complex64::new(1.0, 0.0);
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    // linear characters: r -> rho, s -> sigma with rho in {1, -1 (m even)}
    let rhos: Vec<f64> = if m.is_multiple_of(2) {
        vec![1.0, -1.0]
    } else {
        vec![1.0]
    };
    for &rho in &rhos {
        for &sigma in &[1.0f64, -1.0] {
            rows.push(
                (0..order)
                    .map(|x| {
                        let (f, k) = (x / m, x % m);
                        one * rho.powi(k as i32) * sigma.powi(f as i32)
                    })
                    .collect(),
            );
        }
    }
    let top = if m.is_multiple_of(2) {
        m / 2
    } else {
        m.div_ceil(2)
    };
    for h in 1..top {
        rows.push(
            (0..order)
                .map(|x| {
                    let (f, k) = (x / m, x % m);
                    if f == 1 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        let angle = 2.0 * PI * (h * k) as f64 / m as f64;
                        Complex64::new(2.0 * angle.cos(), 0.0)
                    }
                })
                .collect(),
        );
    }
    rows
}

/// An element of `K(C[G])`: integer multiplicities over the irreducible
/// characters of a fixed table.
#[derive(Clone)]
pub struct VirtualModule {
    table: Arc<CharacterTable>,
    mult: Vec<i64>,
}

impl fmt::Debug for VirtualModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VirtualModule{:?}", self.mult)
    }
}

impl PartialEq for VirtualModule {
    fn eq(&self, other: &Self) -> bool {
        self.mult == other.mult && self.same_table(other)
    }
}

impl Eq for VirtualModule {}

impl VirtualModule {
    pub fn new(table: Arc<CharacterTable>, mult: Vec<i64>) -> Self {
        assert_eq!(mult.len(), table.num_characters());
        VirtualModule { table, mult }
    }

    pub fn zero(table: &Arc<CharacterTable>) -> Self {
        Self::new(table.clone(), vec![0; table.num_characters()])
    }

    /// `[C[G]]`.
    pub fn regular(table: &Arc<CharacterTable>) -> Self {
        Self::new(table.clone(), table.dims().to_vec())
    }

    /// `[C]`, the trivial one-dimensional module.
    pub fn trivial(table: &Arc<CharacterTable>) -> Self {
        let mut mult = vec![0; table.num_characters()];
        mult[0] = 1;
        Self::new(table.clone(), mult)
    }

    /// Permutation module of `G` on the cosets of `<generator>`, i.e. the
    /// module induced from the trivial character of the cyclic subgroup.
    pub fn induced_trivial(table: &Arc<CharacterTable>, generator: usize) -> Result<Self> {
        let g = table.group();
        if generator >= g.order() {
            return Err(Error::InvalidGroup(format!(
                "element {generator} is not in a group of order {}",
                g.order()
            )));
        }
        let e = g.element_order(generator);
        let mut powers = Vec::with_capacity(e);
        let mut x = g.identity();
        for _ in 0..e {
            powers.push(x);
            x = g.mul(x, generator);
        }
        let mult = (0..table.num_characters())
            .map(|i| {
                let s: Complex64 = powers.iter().map(|&h| table.value(i, h)).sum();
                let m = round_multiplicity(i, s / e as f64)?;
                if m < 0 {
                    return Err(Error::Internal(format!(
                        "negative multiplicity {m} in a permutation module"
                    )));
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(table.clone(), mult))
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.mult
    }

    /// True when both modules live over the same character table (shared or
    /// structurally identical).
    pub fn same_table(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.table, &other.table) || self.table.same_as(&other.table)
    }

    fn check_table(&self, other: &Self) {
        assert!(
            self.same_table(other),
            "virtual modules over different character tables"
        );
    }

    pub fn dimension(&self) -> i64 {
        self.mult
            .iter()
            .zip(self.table.dims())
            .map(|(m, d)| m * d)
            .sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(
            self.table.clone(),
            self.mult.iter().map(|m| m * k).collect(),
        )
    }

    /// Complex-conjugate (contragredient) module.
    pub fn dual(&self) -> Self {
        let mut mult = vec![0; self.mult.len()];
        for (i, &m) in self.mult.iter().enumerate() {
            mult[self.table.dual_index(i)] += m;
        }
        Self::new(self.table.clone(), mult)
    }

    /// The unique `v` with `2v = self`.
    pub fn halve(&self) -> Result<Self> {
        let mut mult = Vec::with_capacity(self.mult.len());
        for (index, &value) in self.mult.iter().enumerate() {
            if value % 2 != 0 {
                return Err(Error::OddMultiplicity { index, value });
            }
            mult.push(value / 2);
        }
        Ok(Self::new(self.table.clone(), mult))
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    /// True when the class is represented by an honest module.
    pub fn is_effective(&self) -> bool {
        self.mult.iter().all(|&m| m >= 0)
    }

    /// Character of the module, one value per conjugacy class.
    pub fn character(&self) -> Vec<Complex64> {
        (0..self.table.classes().len())
            .map(|c| {
                self.mult
                    .iter()
                    .enumerate()
                    .map(|(i, &m)| self.table.class_values(i)[c] * m as f64)
                    .sum()
            })
            .collect()
    }

    /// `<self, other>` computed from class sums of the characters.
    pub fn inner_product(&self, other: &Self) -> Result<i64> {
        self.check_table(other);
        let a = self.character();
        let b = other.character();
        let order = self.table.group().order() as f64;
        let ip: Complex64 = self
            .table
            .classes()
            .iter()
            .enumerate()
            .map(|(c, class)| a[c] * b[c].conj() * class.len() as f64)
            .sum::<Complex64>()
            / order;
        round_multiplicity(0, ip)
    }
}

impl Add for &VirtualModule {
    type Output = VirtualModule;
    fn add(self, rhs: &VirtualModule) -> VirtualModule {
        self.check_table(rhs);
        VirtualModule::new(
            self.table.clone(),
            self.mult
                .iter()
                .zip(&rhs.mult)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &VirtualModule {
    type Output = VirtualModule;
    fn sub(self, rhs: &VirtualModule) -> VirtualModule {
        self.check_table(rhs);
        VirtualModule::new(
            self.table.clone(),
            self.mult
                .iter()
                .zip(&rhs.mult)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &VirtualModule {
    type Output = VirtualModule;
    fn neg(self) -> VirtualModule {
        self.scale(-1)
    }
}

impl Mul<&VirtualModule> for i64 {
    type Output = VirtualModule;
    fn mul(self, rhs: &VirtualModule) -> VirtualModule {
        rhs.scale(self)
    }
}

impl Add for VirtualModule {
    type Output = VirtualModule;
    fn add(self, rhs: VirtualModule) -> VirtualModule {
        &self + &rhs
    }
}

impl Sub for VirtualModule {
    type Output = VirtualModule;
    fn sub(self, rhs: VirtualModule) -> VirtualModule {
        &self - &rhs
    }
}
