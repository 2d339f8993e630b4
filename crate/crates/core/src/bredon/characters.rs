use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::complex::IsoType;
use crate::error::{Error, Result};
use crate::homology::group::{model_generators, GroupModel};
use crate::homology::IntMatrix;

/// a + bω with ω a primitive cube root of unity. Every character value of
/// the six stabiliser types lies in ℤ[ω].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Eisenstein {
    pub a: i64,
    pub b: i64,
}

impl Eisenstein {
    pub const ZERO: Eisenstein = Eisenstein { a: 0, b: 0 };
    pub const ONE: Eisenstein = Eisenstein { a: 1, b: 0 };
    pub const OMEGA: Eisenstein = Eisenstein { a: 0, b: 1 };

    pub fn int(a: i64) -> Self {
        Eisenstein { a, b: 0 }
    }

    /// ω̄ = ω² = −1 − ω.
    pub fn conj(self) -> Self {
        Eisenstein { a: self.a - self.b, b: -self.b }
    }

    /// The k-th power of the primitive sixth root 1 + ω.
    pub fn sixth_root(k: usize) -> Self {
        let z = Eisenstein { a: 1, b: 1 };
        (0..k % 6).fold(Eisenstein::ONE, |x, _| x * z)
    }

    pub fn as_integer(self) -> Option<i64> {
        (self.b == 0).then_some(self.a)
    }
}

impl Add for Eisenstein {
    type Output = Eisenstein;
    fn add(self, o: Eisenstein) -> Eisenstein {
        Eisenstein { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for Eisenstein {
    type Output = Eisenstein;
    fn sub(self, o: Eisenstein) -> Eisenstein {
        Eisenstein { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for Eisenstein {
    type Output = Eisenstein;
    fn neg(self) -> Eisenstein {
        Eisenstein { a: -self.a, b: -self.b }
    }
}

impl Mul for Eisenstein {
    type Output = Eisenstein;
    fn mul(self, o: Eisenstein) -> Eisenstein {
        // ω² = −1 − ω
        Eisenstein { a: self.a * o.a - self.b * o.b, b: self.a * o.b + self.b * o.a - self.b * o.b }
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}ω"),
            (a, b) if b < 0 => write!(f, "{a}-{}ω", -b),
            (a, b) => write!(f, "{a}+{b}ω"),
        }
    }
}

/// Irreducible complex characters of a stabiliser model, as functions on
/// its elements, sorted by degree and then by values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub model: GroupModel,
    pub chars: Vec<Vec<Eisenstein>>,
}

impl CharacterTable {
    pub fn rank(&self) -> usize {
        self.chars.len()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.chars.iter().map(|c| c[0].a).collect()
    }

    /// ⟨χ, ψ⟩ = |G|⁻¹ Σ χ(g) ψ(g)‾, if it is an integer.
    pub fn inner(&self, chi: &[Eisenstein], psi: &[Eisenstein]) -> Option<i64> {
        let s = chi.iter().zip(psi).fold(Eisenstein::ZERO, |acc, (&x, &y)| acc + x * y.conj());
        let n = self.model.order() as i64;
        (s.b == 0 && s.a % n == 0).then_some(s.a / n)
    }

    /// Values on the conjugacy classes (ordered as in the model).
    pub fn class_values(&self) -> Vec<Vec<Eisenstein>> {
        let classes = self.model.conjugacy_classes();
        self.chars.iter().map(|c| classes.iter().map(|cl| c[cl[0]]).collect()).collect()
    }

    /// Row orthogonality, one irreducible per class, and Σ deg² = |G|.
    pub fn is_valid(&self) -> bool {
        let k = self.rank();
        let ortho = (0..k).all(|i| (0..k).all(|j| self.inner(&self.chars[i], &self.chars[j]) == Some((i == j) as i64)));
        let squares: i64 = self.degrees().iter().map(|d| d * d).sum();
        ortho && k == self.model.conjugacy_classes().len() && squares == self.model.order() as i64
    }
}

/// Homomorphisms to the sixth roots of unity, found by trying every image
/// of a generating set.
fn linear_characters(g: &GroupModel) -> Vec<Vec<Eisenstein>> {
    let n = g.order();
    let gens = model_generators(g);
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let mut val: Vec<Option<Eisenstein>> = vec![None; n];
        val[0] = Some(Eisenstein::ONE);
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for (s, &k) in gens.iter().zip(&choice) {
                let y = g.mul(x, *s);
                if val[y].is_none() {
                    val[y] = Some(val[x].unwrap() * Eisenstein::sixth_root(k));
                    stack.push(y);
                }
            }
        }
        let chi: Vec<Eisenstein> = val.into_iter().map(|v| v.expect("generating set")).collect();
        if (0..n).all(|a| (0..n).all(|b| chi[g.mul(a, b)] == chi[a] * chi[b])) && !out.contains(&chi) {
            out.push(chi);
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < 6 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Character table of a stabiliser type: the linear characters, plus the
/// permutation character minus the trivial one when that is irreducible
/// (the models of S₃ and A₄ act on 3 and 4 points).
pub fn representation_ring(t: IsoType) -> Result<CharacterTable> {
    let model = GroupModel::new(t);
    let mut chars = linear_characters(&model);
    let mut table = CharacterTable { model: model.clone(), chars: chars.clone() };
    if chars.len() < model.conjugacy_classes().len() {
        let std: Vec<Eisenstein> = (0..model.order())
            .map(|x| {
                let p = model.permutation(x);
                Eisenstein::int((0..p.len()).filter(|&i| p[i] as usize == i).count() as i64 - 1)
            })
            .collect();
        if table.inner(&std, &std) == Some(1) {
            chars.push(std);
        }
    }
    chars.sort_by(|x, y| (x[0].a, x).cmp(&(y[0].a, y)));
    table.chars = chars;
    if !table.is_valid() {
        return Err(Error::Internal(format!("incomplete character table for {t}")));
    }
    Ok(table)
}

/// Induction R(H) → R(G) along an embedding φ of models, in the bases of
/// irreducibles: entry (ψ, χ) = ⟨χ, ψ∘φ⟩_H.
pub fn induction_matrix(h: &CharacterTable, g: &CharacterTable, phi: &[usize]) -> Result<IntMatrix> {
    if phi.len() != h.model.order() || !g.model.is_embedding(&h.model, phi) {
        return Err(Error::NotASubgroup);
    }
    let mut m = IntMatrix::zeros(g.rank(), h.rank());
    for (i, psi) in g.chars.iter().enumerate() {
        let res: Vec<Eisenstein> = phi.iter().map(|&x| psi[x]).collect();
        for (j, chi) in h.chars.iter().enumerate() {
            let c = h.inner(chi, &res).ok_or_else(|| Error::Internal("non-integral multiplicity".into()))?;
            m[(i, j)] = c.into();
        }
    }
    Ok(m)
}
