//! Multiquadratic torsors and twisting of finite G-sets.

use std::fmt;

use super::perm::Perm;
use super::wreath::{dn_coset_action, rho, rho2, wreath_mul, WreathElement};
use crate::error::{Error, Result};
use crate::etale::{EtaleAlgebra, EtaleComponent};
use crate::field::{are_independent, FieldDescriptor, SquareClass};

/// Largest elementary abelian rank accepted for a torsor.
pub const MAX_RANK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetGroup {
    Sn(usize),
    Bn(usize),
    Dn(usize),
    /// `W(G_2) = S_2 × S_3`, realized on the points `{1,2} ⊔ {3,4,5}`.
    G2,
}

impl TargetGroup {
    /// Number of points the elements act on.
    pub fn degree(&self) -> usize {
        match *self {
            TargetGroup::Sn(n) | TargetGroup::Bn(n) | TargetGroup::Dn(n) => n,
            TargetGroup::G2 => 5,
        }
    }

    /// Default peeling depth for the lifting induction: `n` for `B_n` (and
    /// `S_n`), `n - 1 + n/2` for `D_n`, `2` for `G_2`. The `v`-family range
    /// of `B_n` uses [`TargetGroup::v_family_n0`].
    pub fn default_n0(&self) -> usize {
        match *self {
            TargetGroup::Sn(n) | TargetGroup::Bn(n) => n,
            TargetGroup::Dn(n) => (n + n / 2).saturating_sub(1),
            TargetGroup::G2 => 2,
        }
    }

    pub fn v_family_n0(&self) -> usize {
        2 * self.degree()
    }

    fn check(&self, x: &WreathElement) -> Result<()> {
        if x.n() != self.degree() {
            return Err(Error::SizeMismatch(format!(
                "image {x} acts on {} points, target {self} on {}",
                x.n(),
                self.degree()
            )));
        }
        match self {
            TargetGroup::Sn(_) if x.flips() != 0 => {
                Err(Error::InvalidInput(format!("{x} has sign flips but the target is {self}")))
            }
            TargetGroup::Dn(_) if !x.in_dn() => Err(Error::NotInDn(x.to_string())),
            TargetGroup::G2 => {
                let p = x.perm();
                if x.flips() != 0 || p.apply(0) > 1 || p.apply(1) > 1 {
                    Err(Error::InvalidInput(format!("{x} does not preserve the G2 blocks")))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TargetGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetGroup::Sn(n) => write!(f, "S{n}"),
            TargetGroup::Bn(n) => write!(f, "B{n}"),
            TargetGroup::Dn(n) => write!(f, "D{n}"),
            TargetGroup::G2 => write!(f, "G2"),
        }
    }
}

/// A homomorphism `(Z/2)^m → G`, with the `j`-th generator acting on
/// `sqrt d_j` by a sign and fixing the other roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiquadraticTorsor {
    field: FieldDescriptor,
    d: Vec<SquareClass>,
    target: TargetGroup,
    images: Vec<WreathElement>,
}

impl MultiquadraticTorsor {
    pub fn new(
        field: FieldDescriptor,
        d: Vec<SquareClass>,
        target: TargetGroup,
        images: Vec<WreathElement>,
    ) -> Result<Self> {
        if d.len() != images.len() {
            return Err(Error::SizeMismatch(format!("{} square classes for {} images", d.len(), images.len())));
        }
        if d.len() > MAX_RANK {
            return Err(Error::SizeMismatch(format!("rank {} exceeds {MAX_RANK}", d.len())));
        }
        for c in &d {
            field.check_same(&c.field())?;
        }
        match field {
            FieldDescriptor::Rationals => {
                if !are_independent(&d) {
                    return Err(Error::NotIndependent(join(&d)));
                }
            }
            FieldDescriptor::Formal(_) => {
                let mut seen = 0u64;
                for c in &d {
                    let SquareClass::Formal { mask, .. } = c else { unreachable!() };
                    if mask.count_ones() != 1 || mask & 1 == 1 || seen & mask != 0 {
                        return Err(Error::NotIndependent(format!(
                            "formal torsors need distinct generators t_i, got {}",
                            join(&d)
                        )));
                    }
                    seen |= mask;
                }
            }
            other => return Err(Error::UnsupportedBackend(other.to_string())),
        }
        if let TargetGroup::Sn(n) | TargetGroup::Bn(n) | TargetGroup::Dn(n) = target {
            if n == 0 || n > 32 {
                return Err(Error::SizeMismatch(format!("target rank {n} outside 1..=32")));
            }
        }
        for x in &images {
            target.check(x)?;
            if !wreath_mul(x, x)?.is_identity() {
                return Err(Error::InconsistentAction(format!("{x} is not an involution")));
            }
        }
        for (i, x) in images.iter().enumerate() {
            for y in &images[i + 1..] {
                if wreath_mul(x, y)? != wreath_mul(y, x)? {
                    return Err(Error::InconsistentAction(format!("{x} and {y} do not commute")));
                }
            }
        }
        Ok(MultiquadraticTorsor { field, d, target, images })
    }

    /// The torsor with no generators (the split torsor).
    pub fn trivial(field: FieldDescriptor, target: TargetGroup) -> Result<Self> {
        Self::new(field, vec![], target, vec![])
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn d(&self) -> &[SquareClass] {
        &self.d
    }

    pub fn target(&self) -> TargetGroup {
        self.target
    }

    pub fn images(&self) -> &[WreathElement] {
        &self.images
    }

    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// Same data viewed in another target group.
    pub fn retarget(&self, target: TargetGroup) -> Result<Self> {
        Self::new(self.field, self.d.clone(), target, self.images.clone())
    }

    /// The `n`-point set: the images themselves for `S_n`, `ρ` for `B_n`, `D_n`.
    pub fn natural_set(&self) -> Result<GSet> {
        match self.target {
            TargetGroup::G2 => Err(Error::WrongTarget("use the G2 factors".into())),
            _ => GSet::new(self.target.degree(), self.images.iter().map(rho).collect()),
        }
    }

    /// The `2n`-point set through `ρ_2`.
    pub fn double_set(&self) -> Result<GSet> {
        match self.target {
            TargetGroup::Bn(n) | TargetGroup::Dn(n) => GSet::new(2 * n, self.images.iter().map(rho2).collect()),
            t => Err(Error::WrongTarget(format!("ρ2 needs B_n or D_n, got {t}"))),
        }
    }

    /// The `2^{n-1}` cosets of `S_n` in `W(D_n)`.
    pub fn coset_set(&self) -> Result<GSet> {
        match self.target {
            TargetGroup::Dn(n) => {
                GSet::new(1 << (n - 1), self.images.iter().map(|x| dn_coset_action(n, x)).collect::<Result<Vec<_>>>()?)
            }
            t => Err(Error::WrongTarget(format!("coset action needs D_n, got {t}"))),
        }
    }

    /// Split a `G_2` torsor into its `S_2` and `S_3` factors.
    pub fn split_g2(&self) -> Result<(Self, Self)> {
        if self.target != TargetGroup::G2 {
            return Err(Error::WrongTarget(format!("expected G2, got {}", self.target)));
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        for x in &self.images {
            let p = x.perm().images();
            a.push(WreathElement::new(Perm::new(p[..2].to_vec())?, 0)?);
            b.push(WreathElement::new(Perm::new(p[2..].iter().map(|i| i - 2).collect())?, 0)?);
        }
        Ok((
            Self::new(self.field, self.d.clone(), TargetGroup::Sn(2), a)?,
            Self::new(self.field, self.d.clone(), TargetGroup::Sn(3), b)?,
        ))
    }
}

fn join(d: &[SquareClass]) -> String {
    d.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

/// A finite set with one permutation per torsor generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSet {
    size: usize,
    action: Vec<Perm>,
}

impl GSet {
    pub fn new(size: usize, action: Vec<Perm>) -> Result<Self> {
        for p in &action {
            if p.len() != size {
                return Err(Error::InconsistentAction(format!(
                    "permutation on {} points for a set of size {size}",
                    p.len()
                )));
            }
            if !p.compose(p).is_identity() {
                return Err(Error::InconsistentAction(format!("{p} is not an involution")));
            }
        }
        for (i, p) in action.iter().enumerate() {
            for q in &action[i + 1..] {
                if p.compose(q) != q.compose(p) {
                    return Err(Error::InconsistentAction(format!("{p} and {q} do not commute")));
                }
            }
        }
        Ok(GSet { size, action })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn action(&self) -> &[Perm] {
        &self.action
    }

    /// Orbits of the generated group, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for s in 0..self.size {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut orbit = vec![s];
            let mut k = 0;
            while k < orbit.len() {
                let x = orbit[k];
                for p in &self.action {
                    let y = p.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                k += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    fn act(&self, eps: u64, x: usize) -> usize {
        let mut y = x;
        for (j, p) in self.action.iter().enumerate() {
            if eps >> j & 1 == 1 {
                y = p.apply(y);
            }
        }
        y
    }
}

/// Basis of the annihilator of `h` (a list spanning a subspace of `F_2^m`),
/// in reduced echelon form with pivots on the lowest free coordinates.
fn annihilator_basis(m: usize, h: &[u64]) -> Vec<u64> {
    // Row-reduce h.
    let mut rows: Vec<u64> = Vec::new();
    for &v in h {
        let mut v = v;
        for &r in &rows {
            let lead = 63 - r.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            let lead = 63 - v.leading_zeros();
            for r in rows.iter_mut() {
                if *r >> lead & 1 == 1 {
                    *r ^= v;
                }
            }
            rows.push(v);
        }
    }
    let pivots: Vec<u32> = rows.iter().map(|r| 63 - r.leading_zeros()).collect();
    let mut out = Vec::new();
    for f in 0..m as u32 {
        if pivots.contains(&f) {
            continue;
        }
        let mut a = 1u64 << f;
        for (r, &p) in rows.iter().zip(&pivots) {
            if r >> f & 1 == 1 {
                a |= 1 << p;
            }
        }
        out.push(a);
    }
    out
}

/// The étale algebra `Maps(X, k_sep)^Γ`: one multiquadratic component per
/// orbit, cut out by the annihilator of the stabilizer.
pub fn twist(t: &MultiquadraticTorsor, x: &GSet) -> Result<EtaleAlgebra> {
    let m = t.rank();
    if x.action.len() != m {
        return Err(Error::InconsistentAction(format!("{} permutations for a torsor of rank {m}", x.action.len())));
    }
    let mut comps = Vec::new();
    for orbit in x.orbits() {
        let base = orbit[0];
        let stab: Vec<u64> = (0..1u64 << m).filter(|&e| x.act(e, base) == base).collect();
        let perp = annihilator_basis(m, &stab);
        if orbit.len() != 1 << perp.len() {
            return Err(Error::InconsistentAction(format!(
                "orbit of size {} with {} independent characters",
                orbit.len(),
                perp.len()
            )));
        }
        let mut classes = Vec::with_capacity(perp.len());
        for a in perp {
            let mut c = t.field.trivial();
            for (i, di) in t.d.iter().enumerate() {
                if a >> i & 1 == 1 {
                    c = c.mul(di)?;
                }
            }
            classes.push(c);
        }
        comps.push(EtaleComponent::Multiquadratic(classes));
    }
    EtaleAlgebra::new(t.field, comps)
}
