//! The full computation for one m, from the floor to K-homology, collected
//! into a serialisable report.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::arith::make_ring;
use crate::bredon::{bredon_homology, build_bredon_complex, k_homology_assembly, KHomologyResult};
use crate::complex::orbit::CellCounts;
use crate::complex::OrbitComplex;
use crate::error::{Error, Result};
use crate::homology::equivariant::DoubleComplex;
use crate::homology::AbelianGroup;
use crate::polyhedron::{class_number, cusp_set, floor_decomposition};
use crate::torsion::{classify_type, extract, reduce, verify_axes_theorem, verify_rigidity_counts, HomeoType, RigidityRow, TorsionVertex};

#[derive(Clone, Debug)]
pub struct Settings {
    /// Largest hemisphere norm the floor search may reach.
    pub norm_cap: u64,
    pub q_max: usize,
    pub primes: Vec<u64>,
    pub k_homology: bool,
    pub budget: Option<Duration>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { norm_cap: 4000, q_max: 10, primes: vec![2, 3], k_homology: true, budget: None }
    }
}

struct Clock {
    start: Instant,
    budget: Option<Duration>,
}

impl Clock {
    fn check(&self) -> Result<()> {
        match self.budget {
            Some(b) if self.start.elapsed() > b => Err(Error::BudgetExceeded(b.as_secs())),
            _ => Ok(()),
        }
    }
}

/// Version key of cached orbit complexes.
pub const CACHE_KEY: &str = concat!("oc1-", env!("CARGO_PKG_VERSION"));

pub fn cache_path(dir: &Path, m: u64) -> PathBuf {
    dir.join(format!("orbit-complex-m{m}-{CACHE_KEY}.json"))
}

/// Where a report computed with these settings is stored.
pub fn report_path(dir: &Path, m: u64, settings: &Settings) -> PathBuf {
    let primes: Vec<String> = settings.primes.iter().map(|l| l.to_string()).collect();
    let k = if settings.k_homology { "-k" } else { "" };
    dir.join(format!("report-m{m}-q{}-l{}{k}-{CACHE_KEY}.json", settings.q_max, primes.join("_")))
}

pub fn load_report(dir: &Path, m: u64, settings: &Settings) -> Result<Option<Report>> {
    let path = report_path(dir, m, settings);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(e.to_string()))?;
    serde_json::from_str(&text).map(Some).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
}

pub fn save_report(dir: &Path, report: &Report, settings: &Settings) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
    let text = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(report_path(dir, report.m, settings), text).map_err(|e| Error::Io(e.to_string()))
}

/// A cached complex, without computing anything.
pub fn load_cached(dir: &Path, m: u64) -> Result<OrbitComplex> {
    let path = cache_path(dir, m);
    if !path.exists() {
        return Err(Error::UnknownArtifact(format!("no orbit complex for m = {m} in {}", dir.display())));
    }
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
}

/// The refined orbit complex, computed from scratch.
pub fn compute_complex(m: u64, norm_cap: u64) -> Result<OrbitComplex> {
    let floor = floor_decomposition(make_ring(m)?, norm_cap)?;
    OrbitComplex::from_floor(&floor)
}

/// Read a cached complex, or compute and store it.
pub fn load_or_compute(m: u64, norm_cap: u64, cache: Option<&Path>) -> Result<(OrbitComplex, bool)> {
    make_ring(m)?;
    let Some(dir) = cache else { return Ok((compute_complex(m, norm_cap)?, false)) };
    let path = cache_path(dir, m);
    if path.exists() {
        let c = load_cached(dir, m)?;
        if c.ring.m() != m {
            return Err(Error::Cache(format!("{} holds m = {}", path.display(), c.ring.m())));
        }
        return Ok((c, true));
    }
    let c = compute_complex(m, norm_cap)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
    let text = serde_json::to_string(&c).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(&path, text).map_err(|e| Error::Io(e.to_string()))?;
    Ok((c, false))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModLDims {
    pub l: u64,
    pub first_degree: usize,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EInfinity {
    pub n: usize,
    /// E∞_{p, n−p} for p = 0, 1, 2.
    pub columns: Vec<AbelianGroup>,
}

/// A degree where the E∞ terms alone do not fix the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionFlag {
    pub q: usize,
    pub e_infinity: Vec<AbelianGroup>,
    pub direct_sum: AbelianGroup,
    pub resolved: AbelianGroup,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimaryE2 {
    pub l: u64,
    /// ℓ-primary parts of E²_{p,q} for q = 1 ..= q_max, indexed [p][q − 1].
    pub entries: Vec<Vec<AbelianGroup>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub q_max: usize,
    /// H_q(Γ; ℤ) where determined, indexed by q.
    pub integral: Vec<Option<AbelianGroup>>,
    pub integral_source: Vec<String>,
    pub beta_1: Option<usize>,
    pub mod_l: Vec<ModLDims>,
    pub e_infinity: Vec<EInfinity>,
    pub extensions: Vec<ExtensionFlag>,
    pub uct_consistent: bool,
    pub e2_primary: Vec<PrimaryE2>,
}

impl HomologyResult {
    pub fn mod_l(&self, l: u64) -> Option<&ModLDims> {
        self.mod_l.iter().find(|d| d.l == l)
    }

    pub fn e2_primary(&self, l: u64) -> Option<&PrimaryE2> {
        self.e2_primary.iter().find(|d| d.l == l)
    }
}

/// H_q for q ≤ q_max. With finite vertex stabilisers the total complex is a
/// free resolution and everything is exact; otherwise the rows q ≥ 1 of E²
/// give the degrees q ≥ 3, with the extension between the two columns
/// reported as split.
pub fn assemble_homology(dc: &DoubleComplex, q_max: usize, primes: &[u64]) -> Result<HomologyResult> {
    if dc.len < q_max + 1 {
        return Err(Error::UnsupportedDegree(q_max));
    }
    dc.check()?;
    dc.check_first_differential()?;
    let mut integral = Vec::new();
    let mut source = Vec::new();
    let mut mod_l = Vec::new();
    let mut e_inf = Vec::new();
    let mut extensions = Vec::new();
    let mut uct = true;
    let e2_dims = |l: u64, q: usize| dc.e2_dim_fp(0, q, l) + dc.e2_dim_fp(1, q - 1, l);
    if dc.has_total_complex() {
        for q in 0..=q_max {
            integral.push(Some(dc.total_homology(q)?));
            source.push("total complex".to_string());
        }
        for &l in primes {
            let dims: Vec<usize> = (3..=q_max).map(|q| dc.total_homology_fp(q, l)).collect::<Result<_>>()?;
            for (i, q) in (3..=q_max).enumerate() {
                if dims[i] != e2_dims(l, q) {
                    return Err(Error::Internal(format!("E2 and total complex disagree in degree {q} mod {l}")));
                }
            }
            for q in 1..=q_max {
                let (h, prev) = (integral[q].as_ref().unwrap(), integral[q - 1].as_ref().unwrap());
                uct &= dc.total_homology_fp(q, l)? == h.dim_tensor_fl(l) + prev.dim_tor_fl(l);
            }
            mod_l.push(ModLDims { l, first_degree: 3, dims });
        }
        for n in 1..=2.min(q_max) {
            let cols = dc.e_infinity(n)?;
            let sum = cols.iter().fold(AbelianGroup::trivial(), |a, g| a.direct_sum(g));
            let resolved = integral[n].clone().unwrap();
            if sum != resolved {
                extensions.push(ExtensionFlag { q: n, e_infinity: cols.clone(), direct_sum: sum, resolved, method: "homology of the total complex".into() });
            }
            e_inf.push(EInfinity { n, columns: cols });
        }
    } else {
        for q in 0..=q_max {
            if q == 0 {
                integral.push(Some(AbelianGroup::free(1)));
                source.push("connected quotient".into());
            } else if q <= 2 {
                integral.push(None);
                source.push("needs the cusp stabilisers".into());
            } else {
                let g = dc.e2_entry(0, q)?.direct_sum(&dc.e2_entry(1, q - 1)?);
                integral.push(Some(g));
                source.push("E2 columns 0 and 1, split assumed".into());
            }
        }
        for &l in primes {
            let dims: Vec<usize> = (3..=q_max).map(|q| e2_dims(l, q)).collect();
            for q in 4..=q_max {
                let (h, prev) = (integral[q].as_ref().unwrap(), integral[q - 1].as_ref().unwrap());
                uct &= dims[q - 3] == h.dim_tensor_fl(l) + prev.dim_tor_fl(l);
            }
            mod_l.push(ModLDims { l, first_degree: 3, dims });
        }
    }
    let e2 = dc.e2(q_max)?;
    let e2_primary = primes.iter().map(|&l| PrimaryE2 { l, entries: e2.primary_above_bottom(l) }).collect();
    let beta_1 = integral.get(1).and_then(|g| g.as_ref()).map(|g| g.rank);
    Ok(HomologyResult { q_max, integral, integral_source: source, beta_1, mod_l, e_infinity: e_inf, extensions, uct_consistent: uct, e2_primary })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionSummary {
    pub l: u64,
    pub homeo_type: HomeoType,
    pub vertices: Vec<TorsionVertex>,
    pub edges: usize,
    pub merged_vertices: usize,
    pub unmerged: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub m: u64,
    pub class_number: usize,
    pub cusps: usize,
    pub cells: CellCounts,
    pub refinements: usize,
    /// Σ (−1)^dim / |Γ_σ| over the compact cells, as a fraction.
    pub orbifold_euler_characteristic: String,
    pub homology: HomologyResult,
    pub torsion: Vec<TorsionSummary>,
    pub rigidity_failures: Vec<RigidityRow>,
    pub axes_failures: Vec<usize>,
    pub k_homology: Option<KHomologyResult>,
}

pub fn torsion_summary(complex: &OrbitComplex, l: u64) -> TorsionSummary {
    let g = extract(complex, l);
    let r = reduce(&g);
    TorsionSummary {
        l,
        homeo_type: classify_type(&r),
        merged_vertices: g.vertices.len() - r.vertices.len(),
        vertices: r.vertices.clone(),
        edges: r.edges.len(),
        unmerged: r.unmerged,
    }
}

/// Everything downstream of the orbit complex.
pub fn analyse(complex: &OrbitComplex, settings: &Settings) -> Result<Report> {
    let clock = Clock { start: Instant::now(), budget: settings.budget };
    let m = complex.ring.m();
    let dc = DoubleComplex::new(complex, settings.q_max + 1)?;
    clock.check()?;
    let homology = assemble_homology(&dc, settings.q_max, &settings.primes)?;
    clock.check()?;
    let torsion = settings.primes.iter().map(|&l| torsion_summary(complex, l)).collect();
    let rigidity = verify_rigidity_counts(complex)?;
    let axes_failures = (0..complex.cells[0].len()).filter(|&v| !verify_axes_theorem(complex, v).passes()).collect();
    let k_homology = if settings.k_homology && !complex.has_ideal_vertices() {
        let b = build_bredon_complex(complex)?;
        Some(k_homology_assembly(&bredon_homology(&b))?)
    } else {
        None
    };
    clock.check()?;
    Ok(Report {
        m,
        class_number: class_number(complex.ring),
        cusps: cusp_set(complex).len(),
        cells: complex.counts(),
        refinements: complex.refinements,
        orbifold_euler_characteristic: complex.orbifold_euler_characteristic().to_string(),
        homology,
        torsion,
        rigidity_failures: rigidity.failures().into_iter().cloned().collect(),
        axes_failures,
        k_homology,
    })
}

/// Floor, complex (through the cache if given) and report.
pub fn run(m: u64, settings: &Settings, cache: Option<&Path>) -> Result<Report> {
    let start = Instant::now();
    let (complex, _) = load_or_compute(m, settings.norm_cap, cache)?;
    let rest = Settings { budget: settings.budget.map(|b| b.saturating_sub(start.elapsed())), ..settings.clone() };
    if rest.budget == Some(Duration::ZERO) {
        return Err(Error::BudgetExceeded(settings.budget.unwrap().as_secs()));
    }
    analyse(&complex, &rest)
}
