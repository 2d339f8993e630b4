//! Exhaustive search for the elements carrying one interior point to another.
//!
//! If g(p) = q then |cz + d|² + |c|²t_p² = t_p/t_q =: D, which bounds c and d;
//! given (c, d), the conditions g(p) = q and ad − bc = 1 are two linear
//! equations in (a, b) with determinant −D.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::arith::{GroupElement, QuadInt, QuadRat, RingDescriptor, UhsPoint};
use crate::error::{Error, Result};

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

/// Elements x ∈ O with |x − c|² ≤ r².
pub fn lattice_points_in_disc(ring: RingDescriptor, c: &QuadRat, r_sq: &BigRational) -> Vec<QuadInt> {
    if r_sq.is_negative() {
        return Vec::new();
    }
    let (ca, cb) = c.coords();
    let t = ring.omega_trace() as f64;
    let n = ring.omega_norm() as f64;
    let r = r_sq.to_f64().unwrap().sqrt();
    // |x|² ≥ (n − t²/4)β², and Re x = α + tβ/2
    let beta_r = r / (n - t * t / 4.0).sqrt() + 1.0;
    let cbf = cb.to_f64().unwrap();
    let caf = ca.to_f64().unwrap();
    let mut out = Vec::new();
    let b_lo = (cbf - beta_r).floor() as i64;
    let b_hi = (cbf + beta_r).ceil() as i64;
    for b in b_lo..=b_hi {
        // for fixed β the real part ranges over an interval of half-width r
        let re_c = caf + t * cbf / 2.0;
        let shift = t * b as f64 / 2.0;
        let a_lo = (re_c - r - shift - 1.0).floor() as i64;
        let a_hi = (re_c + r - shift + 1.0).ceil() as i64;
        for a in a_lo..=a_hi {
            let x = QuadInt::new(a, b, ring);
            let d = &QuadRat::from_int(x.clone()) - c;
            if &d.norm() <= r_sq {
                out.push(x);
            }
        }
    }
    out
}

/// All g ∈ PSL₂(O) with g(p) = q, for interior points p, q.
pub fn elements_mapping(p: &UhsPoint, q: &UhsPoint) -> Result<Vec<GroupElement>> {
    if p.is_ideal() || q.is_ideal() {
        return Err(Error::UnboundedSearch);
    }
    let ring = p.ring();
    let Some(dist) = rational_sqrt(&(&p.t_sq / &q.t_sq)) else {
        return Ok(Vec::new());
    };
    let zero = QuadRat::zero(ring);
    let mut out = Vec::new();
    // N(c) t_p² ≤ D
    for c in lattice_points_in_disc(ring, &zero, &(&dist / &p.t_sq)) {
        let cr = QuadRat::from_int(c.clone());
        let rest = &dist - BigRational::from_integer(c.norm()) * &p.t_sq;
        let centre = -&(&cr * &p.z);
        for d in lattice_points_in_disc(ring, &centre, &rest) {
            let dr = QuadRat::from_int(d.clone());
            let w = &(&cr * &p.z) + &dr;
            if w.norm() + BigRational::from_integer(c.norm()) * &p.t_sq != dist {
                continue;
            }
            // a·(z w̄ + c̄t²) + b·w̄ = q_z D,  a·d − b·c = 1
            let tsq = QuadRat::from_rational(&p.t_sq, ring);
            let m11 = &(&p.z * &w.conj()) + &(&cr.conj() * &tsq);
            let m12 = w.conj();
            let rhs1 = q.z.scale_rat(&dist);
            let one = QuadRat::from_rational(&BigRational::one(), ring);
            let det = &(&m11 * &(-&cr)) - &(&m12 * &dr);
            let a = (&(&rhs1 * &(-&cr)) - &(&m12 * &one)).div(&det);
            let b = (&(&m11 * &one) - &(&rhs1 * &dr)).div(&det);
            let (Some(a), Some(b)) = (a.to_integer(), b.to_integer()) else { continue };
            if !(&(&a * &d) - &(&b * &c)).is_one() {
                continue;
            }
            let g = GroupElement::new(a, b, c.clone(), d);
            if g.act(p)? == *q {
                out.push(g);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Pointwise stabiliser of a set of interior points.
pub fn pointwise_stabiliser(vs: &[UhsPoint]) -> Result<Vec<GroupElement>> {
    let first = elements_mapping(&vs[0], &vs[0])?;
    let mut out = Vec::new();
    for g in first {
        if vs[1..].iter().map(|v| g.act(v)).collect::<Result<Vec<_>>>()?.iter().zip(&vs[1..]).all(|(a, b)| a == b) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Elements permuting a finite set of interior points.
pub fn setwise_stabiliser(vs: &[UhsPoint]) -> Result<Vec<GroupElement>> {
    let mut sorted = vs.to_vec();
    sorted.sort();
    let mut out = Vec::new();
    for target in vs {
        for g in elements_mapping(&vs[0], target)? {
            let mut img: Vec<UhsPoint> = vs.iter().map(|v| g.act(v)).collect::<Result<_>>()?;
            img.sort();
            if img == sorted {
                out.push(g);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_ring;
    use num_traits::Zero;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    /// Brute force over all entries with coordinates in a box.
    fn brute_stabiliser(p: &UhsPoint, span: i64) -> Vec<GroupElement> {
        let r = p.ring();
        let vals: Vec<QuadInt> = (-span..=span).flat_map(|a| (-span..=span).map(move |b| QuadInt::new(a, b, r))).collect();
        let mut out = Vec::new();
        for a in &vals {
            for b in &vals {
                for c in &vals {
                    for d in &vals {
                        if (&(a * d) - &(b * c)).is_one() {
                            let g = GroupElement::new(a.clone(), b.clone(), c.clone(), d.clone());
                            if g.act(p).unwrap() == *p {
                                out.push(g);
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn stabiliser_of_top_of_unit_hemisphere() {
        let r = make_ring(1).unwrap();
        let p = UhsPoint::new(QuadRat::zero(r), rat(1, 1));
        let st = pointwise_stabiliser(std::slice::from_ref(&p)).unwrap();
        assert!(st.contains(&GroupElement::inversion(r)));
        assert_eq!(st, brute_stabiliser(&p, 2));
    }

    #[test]
    fn stabilisers_match_brute_force() {
        for (m, a, b, t) in [(2, (0, 1), (0, 1), (1, 1)), (3, (1, 3), (1, 3), (1, 3)), (1, (1, 2), (1, 2), (1, 2)), (7, (1, 2), (0, 1), (1, 4))]
        {
            let r = make_ring(m).unwrap();
            // a point at height² t with real and ω coordinates a, b
            let p = UhsPoint::from_coords(rat(a.0, a.1), rat(b.0, b.1), rat(t.0, t.1), r);
            assert_eq!(pointwise_stabiliser(std::slice::from_ref(&p)).unwrap(), brute_stabiliser(&p, 2), "m={m}");
        }
    }

    #[test]
    fn ideal_points_are_rejected() {
        let r = make_ring(5).unwrap();
        let p = UhsPoint::new(QuadRat::zero(r), BigRational::zero());
        assert_eq!(elements_mapping(&p, &p), Err(Error::UnboundedSearch));
    }
}
