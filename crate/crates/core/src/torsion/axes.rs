use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{GroupElement, QuadInt, QuadRat, UhsPoint};
use crate::complex::{FiniteSubgroup, IsoType, OrbitComplex};

/// The rotation axis of a cyclic group, as the binary quadratic form
/// A z² + B z + C (up to scalars) whose roots on ℂ ∪ {∞} are its endpoints.
/// The endpoints of an elliptic axis lie in a quadratic extension of the
/// field, while the form stays rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Axis {
    pub form: [String; 3],
    #[serde(skip)]
    coeffs: Vec<QuadRat>,
}

fn normalise(v: [QuadRat; 3]) -> Vec<QuadRat> {
    let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero form").clone();
    v.iter().map(|x| x.div(&lead)).collect()
}

impl Axis {
    fn from_coeffs(c: Vec<QuadRat>) -> Self {
        Axis { form: [c[0].to_string(), c[1].to_string(), c[2].to_string()], coeffs: c }
    }

    /// Fixed points of z ↦ (az + b)/(cz + d): c z² + (d − a) z − b = 0.
    pub fn of_element(g: &GroupElement) -> Self {
        let q = |x: &QuadInt| QuadRat::from_int(x.clone());
        Self::from_coeffs(normalise([q(&g.c), q(&(&g.d - &g.a)), q(&-&g.b)]))
    }

    /// Image of the axis under h, by substituting h⁻¹(w) into the form.
    pub fn moved_by(&self, h: &GroupElement) -> Self {
        let inv = h.inverse();
        let q = |x: &QuadInt| QuadRat::from_int(x.clone());
        let (p, r2, r, s) = (q(&inv.a), q(&inv.b), q(&inv.c), q(&inv.d));
        let [a, b, c] = [&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]];
        let two = QuadRat::from_int(QuadInt::new(2, 0, p.ring()));
        let w2 = &(&(a * &(&p * &p)) + &(b * &(&p * &r))) + &(c * &(&r * &r));
        let w1 = &(&(&two * &(a * &(&p * &r2))) + &(b * &(&(&p * &s) + &(&r2 * &r)))) + &(&two * &(c * &(&r * &s)));
        let w0 = &(&(a * &(&r2 * &r2)) + &(b * &(&r2 * &s))) + &(c * &(&s * &s));
        Self::from_coeffs(normalise([w2, w1, w0]))
    }
}

/// Whether the fixed geodesic of an elliptic element passes through p.
fn axis_contains(g: &GroupElement, p: &UhsPoint) -> bool {
    let q = |x: &QuadInt| QuadRat::from_int(x.clone());
    if g.c.is_zero() {
        // vertical line over b/(d − a)
        let foot = q(&g.b).div(&q(&(&g.d - &g.a)));
        return foot == p.z;
    }
    let tr = g.trace();
    let disc = &(&tr * &tr) - &QuadInt::new(4, 0, tr.ring());
    if !disc.b.is_zero() {
        return false;
    }
    let centre = q(&(&g.a - &g.d)).div(&q(&(&g.c + &g.c)));
    let lhs = (&p.z - &centre).norm() + &p.t_sq;
    let rhs = BigRational::new(disc.a.abs(), g.c.norm() * 4);
    lhs == rhs && rhs.is_positive()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxesReport {
    pub vertex: usize,
    pub iso_type: IsoType,
    pub axes: Vec<Axis>,
    /// Sizes of the orbits of the stabiliser on the axes.
    pub axis_orbits: Vec<usize>,
    /// Sizes of the conjugacy classes of nontrivial cyclic subgroups.
    pub subgroup_classes: Vec<usize>,
    pub injective: bool,
    pub equivariant: bool,
    pub through_vertex: bool,
}

impl AxesReport {
    pub fn passes(&self) -> bool {
        self.injective && self.equivariant && self.through_vertex && self.axis_orbits == self.subgroup_classes
    }
}

fn orbit_sizes<T: Ord + Clone>(items: &[T], act: impl Fn(&T, &GroupElement) -> T, group: &FiniteSubgroup) -> Vec<usize> {
    let mut seen: BTreeSet<T> = BTreeSet::new();
    let mut sizes = Vec::new();
    for x in items {
        if seen.contains(x) {
            continue;
        }
        let orbit: BTreeSet<T> = group.elements().iter().map(|h| act(x, h)).collect();
        sizes.push(orbit.len());
        seen.extend(orbit);
    }
    sizes.sort();
    sizes
}

/// Check that sending each nontrivial cyclic subgroup of the stabiliser of
/// vertex `v` to its rotation axis is a bijection onto the axes through v that
/// intertwines conjugation with the geometric action.
pub fn verify_axes_theorem(complex: &OrbitComplex, v: usize) -> AxesReport {
    let cell = &complex.cells[0][v];
    let g = &cell.stabiliser;
    let mut report = AxesReport {
        vertex: v,
        iso_type: cell.iso_type,
        axes: Vec::new(),
        axis_orbits: Vec::new(),
        subgroup_classes: Vec::new(),
        injective: true,
        equivariant: true,
        through_vertex: true,
    };
    if cell.ideal || g.order() == 1 {
        return report;
    }
    let id = GroupElement::identity(complex.ring);
    let mut subgroups: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
    for x in g.elements().iter().filter(|x| !x.is_identity()) {
        let c = FiniteSubgroup::generated(std::slice::from_ref(x), id.clone(), g.order()).expect("inside a finite group");
        subgroups.insert(c.elements().to_vec());
    }
    let subgroups: Vec<Vec<GroupElement>> = subgroups.into_iter().collect();
    let generator = |s: &[GroupElement]| s.iter().find(|x| !x.is_identity()).expect("nontrivial").clone();
    let axes: Vec<Axis> = subgroups.iter().map(|s| Axis::of_element(&generator(s))).collect();
    let distinct: BTreeSet<&Axis> = axes.iter().collect();
    report.injective = distinct.len() == axes.len();
    // every element of a subgroup fixes the same geodesic, which meets v
    report.through_vertex = subgroups.iter().zip(&axes).all(|(s, a)| {
        s.iter().filter(|x| !x.is_identity()).all(|x| Axis::of_element(x) == *a && axis_contains(x, &cell.vertices[0]))
    });
    let conj = |s: &Vec<GroupElement>, h: &GroupElement| {
        let mut c: Vec<GroupElement> = s.iter().map(|x| x.conjugate_by(&h.inverse())).collect();
        c.sort();
        c
    };
    for (s, a) in subgroups.iter().zip(&axes) {
        for h in g.elements() {
            let target = conj(s, h);
            match subgroups.iter().position(|t| *t == target) {
                Some(j) => report.equivariant &= a.moved_by(h) == axes[j],
                None => report.equivariant = false,
            }
        }
    }
    report.axis_orbits = orbit_sizes(&axes, |a, h| a.moved_by(h), g);
    report.subgroup_classes = orbit_sizes(&subgroups, |s, h| conj(s, h), g);
    report.axes = axes;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::group::GroupModel;
    use crate::pipeline::compute_complex;

    /// Conjugacy class sizes of nontrivial cyclic subgroups, from the model.
    fn model_classes(t: IsoType) -> Vec<usize> {
        let g = GroupModel::new(t);
        let n = g.order();
        let cyclic = |x: usize| {
            let mut s = vec![0];
            let mut y = x;
            while y != 0 {
                s.push(y);
                y = g.mul(y, x);
            }
            s.sort();
            s
        };
        let subs: BTreeSet<Vec<usize>> = (1..n).map(cyclic).collect();
        let subs: Vec<Vec<usize>> = subs.into_iter().collect();
        orbit_sizes_model(&subs, &g)
    }

    fn orbit_sizes_model(subs: &[Vec<usize>], g: &GroupModel) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in subs {
            if seen.contains(s) {
                continue;
            }
            let orbit: BTreeSet<Vec<usize>> = (0..g.order())
                .map(|h| {
                    let mut c: Vec<usize> = s.iter().map(|&x| g.mul(g.mul(h, x), g.inv(h))).collect();
                    c.sort();
                    c
                })
                .collect();
            out.push(orbit.len());
            seen.extend(orbit);
        }
        out.sort();
        out
    }

    #[test]
    fn tetrahedral_vertex_has_seven_axes() {
        assert_eq!(model_classes(IsoType::A4), vec![3, 4]);
        for m in [1, 3] {
            let c = compute_complex(m, 4000).unwrap();
            let v = (0..c.cells[0].len()).find(|&v| c.cells[0][v].iso_type == IsoType::A4).expect("an A4 vertex");
            let r = verify_axes_theorem(&c, v);
            assert!(r.passes(), "{r:?}");
            assert_eq!(r.axes.len(), 7);
            assert_eq!(r.axis_orbits, vec![3, 4]);
        }
    }

    #[test]
    fn axes_match_cyclic_subgroups_everywhere() {
        for m in [2, 7, 5] {
            let c = compute_complex(m, 4000).unwrap();
            for v in 0..c.cells[0].len() {
                let cell = &c.cells[0][v];
                let r = verify_axes_theorem(&c, v);
                assert!(r.passes(), "m = {m}: {r:?}");
                if !cell.ideal {
                    assert_eq!(r.subgroup_classes, model_classes(cell.iso_type), "m = {m}, vertex {v}");
                }
            }
        }
    }

    #[test]
    fn moving_an_axis_follows_conjugation() {
        let r = crate::arith::make_ring(2).unwrap();
        let s = GroupElement::inversion(r);
        let t = GroupElement::translation(crate::arith::QuadInt::new(1, 1, r));
        let moved = Axis::of_element(&s).moved_by(&t);
        assert_eq!(moved, Axis::of_element(&s.conjugate_by(&t.inverse())));
    }
}
