//! Published values used by the comparison mode, each with the place it is
//! stated.

use crate::homology::poincare::{p2_non_euclidean, p3_for_components, p3_interval, RationalSeries};
use crate::homology::AbelianGroup;
use crate::pipeline::Report;
use serde::{Deserialize, Serialize};
use crate::torsion::HomeoType;

pub const BETTI: [(u64, usize); 4] = [(19, 1), (43, 2), (67, 3), (163, 7)];
pub const BETTI_ANCHOR: &str = "Proposition, Betti table";

pub fn betti(m: u64) -> Option<usize> {
    BETTI.iter().find(|(k, _)| *k == m).map(|(_, b)| *b)
}

/// H₁ and H₂ of the Proposition for the four non-Euclidean principal cases.
pub fn low_homology(m: u64) -> Option<(AbelianGroup, AbelianGroup)> {
    let b = betti(m)?;
    let h2 = AbelianGroup::free(b - 1).direct_sum(&AbelianGroup::from_cyclic_orders(&[4, 2, 3]));
    Some((AbelianGroup::free(b), h2))
}
pub const LOW_HOMOLOGY_ANCHOR: &str = "Proposition, integral homology in degrees 1 and 2";

/// The two series of the Proposition.
pub fn proposition_series(l: u64) -> Option<RationalSeries> {
    match l {
        2 => Some(p2_non_euclidean()),
        3 => Some(p3_interval()),
        _ => None,
    }
}
pub const SERIES_ANCHOR: &str = "Proposition, Poincaré series at ℓ = 2 and ℓ = 3";

/// A row of the 3-torsion figure.
#[derive(Clone, Debug)]
pub struct FigureRow {
    pub ms: &'static [u64],
    pub circles: usize,
    pub intervals: usize,
}

impl FigureRow {
    pub fn homeo_type(&self) -> HomeoType {
        HomeoType { circles: self.circles, intervals: self.intervals, ..Default::default() }
    }

    pub fn series(&self) -> RationalSeries {
        p3_for_components(self.circles, self.intervals)
    }
}

pub const FIGURE: [FigureRow; 4] = [
    FigureRow { ms: &[2, 5, 6, 10, 11, 15, 22, 29, 34, 35, 46, 51, 58, 87, 95, 115, 123, 155, 159, 187, 191, 235, 267], circles: 1, intervals: 0 },
    FigureRow { ms: &[7, 19, 43, 67, 139, 151, 163], circles: 0, intervals: 1 },
    FigureRow { ms: &[13, 37, 91, 403, 427], circles: 0, intervals: 2 },
    FigureRow { ms: &[39], circles: 1, intervals: 1 },
];
pub const FIGURE_ANCHOR: &str = "Figure, results for the 3-torsion homology";

pub fn figure_row(m: u64) -> Option<&'static FigureRow> {
    FIGURE.iter().find(|r| r.ms.contains(&m))
}

pub const K_ANCHOR: &str = "Theorem, equivariant K-homology table";

/// (K₀, K₁) for the principal cases.
pub fn k_homology(m: u64) -> Option<(AbelianGroup, AbelianGroup)> {
    let z = AbelianGroup::free;
    let two = AbelianGroup::cyclic(2);
    let row = match m {
        1 => (z(6), z(1)),
        2 => (z(5).direct_sum(&two), z(3)),
        3 => (z(5).direct_sum(&two), AbelianGroup::trivial()),
        7 => (z(3), z(3)),
        11 => (z(4).direct_sum(&two), z(3)),
        _ => {
            let b = betti(m)?;
            (z(b - 1).direct_sum(&z(3)).direct_sum(&two), z(1).direct_sum(&z(b)))
        }
    };
    Some(row)
}

pub const PRINCIPAL: [u64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

/// One published quantity set against the computed one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub quantity: String,
    pub anchor: String,
    pub expected: String,
    pub computed: String,
    pub matches: bool,
}

fn entry(quantity: impl Into<String>, anchor: &str, expected: String, computed: String) -> Comparison {
    Comparison { matches: expected == computed, quantity: quantity.into(), anchor: anchor.into(), expected, computed }
}

fn show(g: Option<&AbelianGroup>) -> String {
    g.map_or("undetermined".into(), |g| g.to_string())
}

fn coefficients(s: &RationalSeries, from: usize, to: usize) -> String {
    let c = s.coefficients(to);
    format!("{:?}", &c[from..=to])
}

/// Every published value this report can be checked against.
pub fn compare(r: &Report) -> Vec<Comparison> {
    let mut out = Vec::new();
    let h = &r.homology;
    let q_max = h.q_max;
    let dims = |l: u64| h.mod_l(l).map_or("not computed".into(), |d| format!("{:?}", d.dims));
    if let Some(b) = betti(r.m) {
        out.push(entry("beta_1", BETTI_ANCHOR, b.to_string(), h.beta_1.map_or("undetermined".into(), |b| b.to_string())));
    }
    if let Some((h1, h2)) = low_homology(r.m) {
        out.push(entry("H_1", LOW_HOMOLOGY_ANCHOR, h1.to_string(), show(h.integral[1].as_ref())));
        if q_max >= 2 {
            out.push(entry("H_2", LOW_HOMOLOGY_ANCHOR, h2.to_string(), show(h.integral[2].as_ref())));
        }
        if q_max >= 3 {
            for l in [2, 3] {
                let s = proposition_series(l).unwrap();
                out.push(entry(format!("dim H_q(F_{l}), q = 3..{q_max}"), SERIES_ANCHOR, coefficients(&s, 3, q_max), dims(l)));
            }
        }
    }
    if let Some(row) = figure_row(r.m) {
        let t = r.torsion.iter().find(|t| t.l == 3).map_or("not computed".into(), |t| t.homeo_type.to_string());
        out.push(entry("3-torsion subcomplex", FIGURE_ANCHOR, row.homeo_type().to_string(), t));
        if q_max >= 3 {
            out.push(entry(format!("dim H_q(F_3), q = 3..{q_max}"), FIGURE_ANCHOR, coefficients(&row.series(), 3, q_max), dims(3)));
        }
    }
    if let Some((k0, k1)) = k_homology(r.m) {
        let (c0, c1) = match &r.k_homology {
            Some(k) => (k.k0.to_string(), k.k1.to_string()),
            None => ("not computed".into(), "not computed".into()),
        };
        out.push(entry("K_0", K_ANCHOR, k0.to_string(), c0));
        out.push(entry("K_1", K_ANCHOR, k1.to_string(), c1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_consistent() {
        assert_eq!(k_homology(163).unwrap().0.to_string(), "Z^9 + Z/2");
        assert_eq!(k_homology(163).unwrap().1, AbelianGroup::free(8));
        assert_eq!(low_homology(19).unwrap().1.to_string(), "Z/2 + Z/12");
        assert_eq!(figure_row(39).unwrap().homeo_type().to_string(), "1 circle + 1 interval");
        assert_eq!(FIGURE.iter().map(|r| r.ms.len()).sum::<usize>(), 36);
        assert!(PRINCIPAL.iter().all(|&m| k_homology(m).is_some()));
        assert!(k_homology(5).is_none());
    }
}
