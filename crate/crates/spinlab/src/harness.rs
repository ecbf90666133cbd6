//! Verification harness: space catalog, test-matrix configs, deterministic
//! suite execution, and machine-readable reports.
//!
//! Determinism contract: every entry carries its own seed, ensembles are
//! generated in a documented canonical order (see [`crate::rng::SplitMix64`]
//! for the update equations), report entries are sorted by
//! `(space, operation, seed)`, and all floats in emitted files are formatted
//! with 17 significant digits. Wall times are printed to the console only and
//! never written to report files, so identical runs produce identical bytes.

use crate::clifford::CliffordRep;
use crate::error::{Result, SpinLabError};
use crate::geometry::{Backend, HomogeneousFrame, SharedBackend};
use crate::linalg::{C64, I, RMatrix};
use crate::rng::SplitMix64;
use crate::sasaki::{instability_certificate, KaehlerBase, SasakiBundle};
use crate::spinor::SpinorField;
use crate::tensor::SymTensorField;
use crate::warped::WarpedProduct;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Format a float with 17 significant digits (fixed report formatting).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// FNV-1a 64-bit hash, hex-encoded.
pub fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// A catalog space, specified in config files as `{"family": ...}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpaceConfig {
    /// Unit round 3-sphere as an exact frame algebra (constant spinors are
    /// Killing with constant +1/2).
    S3,
    WarpedFlat { fiber_dim: usize, nu: f64 },
    Sasaki { base: String, k: f64 },
}

impl SpaceConfig {
    /// Stable identifier used for sorting and reporting.
    pub fn id(&self) -> String {
        match self {
            SpaceConfig::S3 => "s3".into(),
            SpaceConfig::WarpedFlat { fiber_dim, nu } => {
                format!("warped_flat(fiber={fiber_dim},nu={nu})")
            }
            SpaceConfig::Sasaki { base, k } => format!("sasaki({base},k={k})"),
        }
    }

    pub fn build(&self) -> Result<BuiltSpace> {
        match self {
            SpaceConfig::S3 => {
                let backend: SharedBackend =
                    Arc::new(Backend::Homogeneous(HomogeneousFrame::s3(-2.0)));
                let rep = Arc::new(CliffordRep::build(3)?);
                Ok(BuiltSpace::S3 { backend, rep })
            }
            SpaceConfig::WarpedFlat { fiber_dim, nu } => {
                Ok(BuiltSpace::Warped(WarpedProduct::build(*fiber_dim, *nu)?))
            }
            SpaceConfig::Sasaki { base, k } => {
                let base = KaehlerBase::by_name(base, *k)?;
                Ok(BuiltSpace::Sasaki(SasakiBundle::build(base)?))
            }
        }
    }
}

pub enum BuiltSpace {
    S3 {
        backend: SharedBackend,
        rep: Arc<CliffordRep>,
    },
    Warped(WarpedProduct),
    Sasaki(SasakiBundle),
}

/// One line of the test matrix.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TestMatrixEntry {
    pub space: SpaceConfig,
    /// Field ensemble family: `none`, `metric`, `random_constant`,
    /// `random_tt`, `polynomial`, `product_direction`.
    #[serde(default = "default_family")]
    pub field_family: String,
    pub operation: String,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Killing-constant override (real part on S3, imaginary rate on warped
    /// spaces). Used for negative controls.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

fn default_family() -> String {
    "none".into()
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SuiteConfig {
    pub name: String,
    pub entries: Vec<TestMatrixEntry>,
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<SuiteConfig> {
        let cfg: SuiteConfig =
            serde_json::from_str(text).map_err(|e| SpinLabError::Config(e.to_string()))?;
        for (i, e) in cfg.entries.iter().enumerate() {
            if !(e.tolerance > 0.0) {
                return Err(SpinLabError::Config(format!(
                    "entry {i}: tolerance must be positive, got {}",
                    e.tolerance
                )));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<SuiteConfig> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Hash of the canonical serialization; identifies the catalog in reports.
    pub fn catalog_hash(&self) -> String {
        fnv1a_hex(
            serde_json::to_string(self)
                .expect("config serializes")
                .as_bytes(),
        )
    }
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Serialize, Clone, Debug)]
pub struct ReportEntry {
    pub space: String,
    pub operation: String,
    pub field_family: String,
    pub samples: usize,
    pub seed: u64,
    pub residual: String,
    pub tolerance: String,
    pub fd_error_estimate: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    /// Console diagnostics only; excluded from emitted files so identical
    /// runs stay byte-identical.
    #[serde(skip)]
    pub wall_time_ms: f64,
}

#[derive(Serialize, Clone, Debug)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub catalog_hash: String,
    pub entries: Vec<ReportEntry>,
    pub summary: Summary,
}

impl Report {
    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "space,operation,field_family,samples,seed,residual,tolerance,fd_error_estimate,status,expected,note\n",
        );
        for e in &self.entries {
            let status = match e.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Inconclusive => "inconclusive",
            };
            let clean = |s: &str| s.replace([',', '\n'], ";");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                e.space,
                e.operation,
                e.field_family,
                e.samples,
                e.seed,
                e.residual,
                e.tolerance,
                e.fd_error_estimate,
                status,
                e.expected.as_deref().map(clean).unwrap_or_default(),
                e.note.as_deref().map(clean).unwrap_or_default(),
            ));
        }
        out
    }
}

/// Write a report in the requested format. Output is byte-stable for a fixed
/// config and seed set.
pub fn emit_report(report: &Report, format: &str, path: &std::path::Path) -> Result<()> {
    let text = match format {
        "json" => report.to_json(),
        "csv" => report.to_csv(),
        other => {
            return Err(SpinLabError::Config(format!(
                "unknown report format '{other}' (expected json or csv)"
            )))
        }
    };
    std::fs::write(path, text)?;
    Ok(())
}

/// Integral of a constant-component quantity over a compact homogeneous
/// space: pointwise value times the closed-form volume. Only exact backends
/// qualify (that is the whole point of the reduction).
pub fn homogeneous_integral(backend: &Backend, pointwise_value: f64) -> Result<f64> {
    match backend {
        Backend::Homogeneous(h) if h.label.starts_with("S3") => {
            Ok(pointwise_value * 2.0 * std::f64::consts::PI.powi(2))
        }
        Backend::Homogeneous(h) => Err(SpinLabError::UnsupportedBackend(format!(
            "no closed-form volume for homogeneous space {}",
            h.label
        ))),
        Backend::Chart(_) => Err(SpinLabError::UnsupportedBackend(
            "integral reduction needs a homogeneous backend".into(),
        )),
    }
}

/// Monte-Carlo volume of the unit 3-sphere in hyperspherical coordinates
/// (`dV = sin²ψ sinθ dψ dθ dφ` over `[0,π]² × [0,2π]`); cross-checks the
/// closed form used by [`homogeneous_integral`].
pub fn s3_volume_monte_carlo(samples: usize, seed: u64) -> f64 {
    let pi = std::f64::consts::PI;
    let mut rng = SplitMix64::new(seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        let psi = rng.next_f64() * pi;
        let theta = rng.next_f64() * pi;
        let _phi = rng.next_f64() * 2.0 * pi;
        acc += psi.sin().powi(2) * theta.sin();
    }
    acc / samples as f64 * 2.0 * pi.powi(3)
}

/// Execute every entry of a parsed config. Entries that raise numeric or
/// construction errors are marked `fail` with the reason in `note`; the
/// function itself only errors on malformed configs (handled by the caller as
/// a usage error).
pub fn run_suite(config: &SuiteConfig) -> Report {
    let mut entries: Vec<ReportEntry> = config.entries.iter().map(run_entry).collect();
    entries.sort_by(|a, b| {
        (a.space.as_str(), a.operation.as_str(), a.seed).cmp(&(
            b.space.as_str(),
            b.operation.as_str(),
            b.seed,
        ))
    });
    let summary = Summary {
        total: entries.len(),
        pass: entries.iter().filter(|e| e.status == Status::Pass).count(),
        fail: entries.iter().filter(|e| e.status == Status::Fail).count(),
        inconclusive: entries
            .iter()
            .filter(|e| e.status == Status::Inconclusive)
            .count(),
    };
    Report {
        suite: config.name.clone(),
        catalog_hash: config.catalog_hash(),
        entries,
        summary,
    }
}

/// Outcome of one executed operation before pass/fail classification.
struct OpOutcome {
    residual: f64,
    fd_error: f64,
    values: BTreeMap<String, String>,
    /// Hard failure independent of the residual (e.g. verdict mismatch).
    hard_failure: Option<String>,
}

impl OpOutcome {
    fn of(residual: f64) -> Self {
        OpOutcome {
            residual,
            fd_error: 0.0,
            values: BTreeMap::new(),
            hard_failure: None,
        }
    }
}

fn run_entry(entry: &TestMatrixEntry) -> ReportEntry {
    let start = std::time::Instant::now();
    let outcome = execute(entry);
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut report = ReportEntry {
        space: entry.space.id(),
        operation: entry.operation.clone(),
        field_family: entry.field_family.clone(),
        samples: entry.samples,
        seed: entry.seed,
        residual: fmt_f64(f64::NAN),
        tolerance: fmt_f64(entry.tolerance),
        fd_error_estimate: fmt_f64(0.0),
        status: Status::Fail,
        expected: entry.expected.map(fmt_f64),
        note: None,
        values: BTreeMap::new(),
        wall_time_ms,
    };
    match outcome {
        Err(err) => {
            report.note = Some(err.to_string());
        }
        Ok(o) => {
            report.residual = fmt_f64(o.residual);
            report.fd_error_estimate = fmt_f64(o.fd_error);
            report.values = o.values;
            report.status = if let Some(reason) = o.hard_failure {
                report.note = Some(reason);
                Status::Fail
            } else if !(o.residual <= entry.tolerance) {
                Status::Fail
            } else if o.fd_error > entry.tolerance {
                // No silent passes: discretization error above tolerance
                // means the residual cannot certify the identity.
                Status::Inconclusive
            } else {
                Status::Pass
            };
        }
    }
    report
}

/// Seeded constant symmetric field (generic, not traceless).
fn random_constant_field(backend: &SharedBackend, seed: u64) -> SymTensorField {
    let m = SplitMix64::new(seed).symmetric(backend.dim());
    SymTensorField::constant(backend.clone(), m, format!("random_seed{seed}"))
        .expect("square by construction")
}

/// Seeded degree-1 polynomial symmetric field (for chart backends).
fn polynomial_field(backend: &SharedBackend, seed: u64) -> SymTensorField {
    let n = backend.dim();
    let mut rng = SplitMix64::new(seed);
    let c0 = rng.symmetric(n);
    let linear: Vec<RMatrix> = (0..n).map(|_| rng.symmetric(n) * 0.3).collect();
    SymTensorField::from_fn(
        backend.clone(),
        Arc::new(move |x: &[f64]| {
            let mut m = c0.clone();
            for (a, ca) in linear.iter().enumerate() {
                m += ca * x[a];
            }
            m
        }),
        format!("poly_seed{seed}"),
    )
}

fn field_for(backend: &SharedBackend, family: &str, seed: u64) -> Result<SymTensorField> {
    match family {
        "metric" => Ok(SymTensorField::metric_field(backend.clone())),
        "random_constant" => Ok(random_constant_field(backend, seed)),
        "random_tt" => Ok(SymTensorField::random_constant_traceless(
            backend.clone(),
            seed,
        )),
        "polynomial" => Ok(polynomial_field(backend, seed)),
        "product_direction" => {
            let half = backend.dim() / 2;
            SymTensorField::product_direction(backend.clone(), half, backend.dim() - half)
        }
        other => Err(SpinLabError::Config(format!(
            "unknown field family '{other}'"
        ))),
    }
}

/// Max curvature FD error estimate over a few sample points (chart backends
/// only; exact backends report zero).
fn curvature_fd_error(backend: &SharedBackend, samples: &[Vec<f64>]) -> Result<f64> {
    if !backend.is_chart() {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for x in samples.iter().take(3) {
        worst = worst.max(backend.curvature(x)?.fd_error);
    }
    Ok(worst)
}

fn execute(entry: &TestMatrixEntry) -> Result<OpOutcome> {
    match entry.space.build()? {
        BuiltSpace::S3 { backend, rep } => execute_s3(entry, backend, rep),
        BuiltSpace::Warped(w) => execute_warped(entry, w),
        BuiltSpace::Sasaki(b) => execute_sasaki(entry, b),
    }
}

fn execute_s3(
    entry: &TestMatrixEntry,
    backend: SharedBackend,
    rep: Arc<CliffordRep>,
) -> Result<OpOutcome> {
    let canonical_mu = 0.5;
    let mu = entry.mu.unwrap_or(canonical_mu);
    let samples = backend.sample_points(entry.samples, entry.seed);
    let x = backend.base_point();
    let sigma =
        SpinorField::solve_constant_killing(backend.clone(), rep.clone(), C64::from(canonical_mu))?;
    match entry.operation.as_str() {
        "curvature_oracle" => {
            let k = entry
                .expected
                .ok_or_else(|| SpinLabError::Config("curvature_oracle needs expected".into()))?;
            let mut residual = backend.verify_einstein(&samples, k)?;
            // Killing-spinor scalar-curvature law R = 4 n (n-1) μ².
            let n = backend.dim() as f64;
            let scalar = backend.curvature(&x)?.scalar;
            let law = 4.0 * n * (n - 1.0) * mu * mu;
            residual = residual.max((scalar - law).abs() / law.abs().max(1.0));
            Ok(OpOutcome::of(residual))
        }
        "killing_residual" => Ok(OpOutcome::of(
            sigma.killing_residual(C64::from(mu), &samples)?,
        )),
        "spinor_curvature" => Ok(OpOutcome::of(sigma.curvature_residual(&x)?)),
        "bochner" => {
            let mut worst: f64 = 0.0;
            for i in 0..entry.samples.max(1) as u64 {
                let h = field_for(&backend, &entry.field_family, entry.seed + i)?;
                let (res, scale) = sigma.bochner_residual(&h, C64::from(mu), &x)?;
                worst = worst.max(res / scale.max(1.0));
            }
            Ok(OpOutcome::of(worst))
        }
        "real_killing_identity" => {
            let mut worst: f64 = 0.0;
            for i in 0..entry.samples.max(1) as u64 {
                let h = field_for(&backend, &entry.field_family, entry.seed + i)?;
                let rk = sigma.real_killing_identity(&h, mu, &x)?;
                worst = worst.max(rk.residual).max(rk.cross_term_imag);
            }
            Ok(OpOutcome::of(worst))
        }
        "spectral_gap" => {
            let mut min_gap = f64::INFINITY;
            for i in 0..entry.samples.max(1) as u64 {
                let h = field_for(&backend, &entry.field_family, entry.seed + i)?;
                min_gap = min_gap.min(sigma.spectral_gap_value(&h, mu, &x));
            }
            let mut out = OpOutcome::of((-min_gap).max(0.0));
            out.values.insert("min_gap".into(), fmt_f64(min_gap));
            Ok(out)
        }
        "homogeneous_integral" => {
            let exact = homogeneous_integral(&backend, 1.0)?;
            let mc = s3_volume_monte_carlo(200_000, entry.seed);
            let mut out = OpOutcome::of((mc - exact).abs() / exact);
            out.values.insert("closed_form".into(), fmt_f64(exact));
            out.values.insert("monte_carlo".into(), fmt_f64(mc));
            Ok(out)
        }
        other => Err(SpinLabError::Config(format!(
            "operation '{other}' not available on s3"
        ))),
    }
}

fn execute_warped(entry: &TestMatrixEntry, w: WarpedProduct) -> Result<OpOutcome> {
    let nu_entry = entry.mu.unwrap_or(w.nu);
    let mu = I * nu_entry;
    let backend = w.backend.clone();
    let samples = backend.sample_points(entry.samples, entry.seed);
    let sigma = w.type1_spinor()?;
    match entry.operation.as_str() {
        "curvature_oracle" => {
            let k = entry.expected.unwrap_or_else(|| w.einstein_constant());
            let mut residual = backend.verify_einstein(&samples, k)?;
            let n = w.dim() as f64;
            let scalar = backend.curvature(&samples[0])?.scalar;
            let law = 4.0 * n * (n - 1.0) * -(w.nu * w.nu);
            residual = residual.max((scalar - law).abs() / law.abs().max(1.0));
            let mut out = OpOutcome::of(residual);
            out.fd_error = curvature_fd_error(&backend, &samples)?;
            Ok(out)
        }
        "killing_residual" => Ok(OpOutcome::of(sigma.killing_residual(mu, &samples)?)),
        "spinor_curvature" => {
            let mut worst: f64 = 0.0;
            for x in samples.iter().take(3) {
                worst = worst.max(sigma.curvature_residual(x)?);
            }
            let mut out = OpOutcome::of(worst);
            out.fd_error = curvature_fd_error(&backend, &samples)?;
            Ok(out)
        }
        "structure" => {
            let q = w.q_sigma(&sigma, &samples);
            let mut worst = q.mean.abs().max(q.spread);
            worst = worst.max(w.length_residual(&sigma, &samples));
            worst = worst.max(w.orthogonality_residual(&sigma, &samples));
            for x in &samples {
                worst = worst.max(crate::spinor::t_eigen_residual(&sigma, w.t_index(), x));
            }
            Ok(OpOutcome::of(worst))
        }
        "bochner" => {
            let points = backend.sample_points(2, entry.seed ^ 0x9e37);
            let mut worst: f64 = 0.0;
            for i in 0..entry.samples.max(1) as u64 {
                let h = field_for(&backend, &entry.field_family, entry.seed + i)?;
                for x in &points {
                    let (res, scale) = sigma.bochner_residual(&h, mu, x)?;
                    worst = worst.max(res / scale.max(1.0));
                }
            }
            let mut out = OpOutcome::of(worst);
            out.fd_error = curvature_fd_error(&backend, &points)?;
            Ok(out)
        }
        "phi_pairing" => {
            let mut worst: f64 = 0.0;
            for i in 0..entry.samples.max(1) as u64 {
                let h = field_for(&backend, &entry.field_family, entry.seed + 2 * i)?;
                let ht = field_for(&backend, &entry.field_family, entry.seed + 2 * i + 1)?;
                for x in &samples {
                    worst = worst.max(sigma.re_inner_phi_residual(&h, &ht, x));
                }
            }
            Ok(OpOutcome::of(worst))
        }
        "t_action" => {
            let mut worst: f64 = 0.0;
            for i in 0..entry.samples.max(1) as u64 {
                let h = field_for(&backend, &entry.field_family, entry.seed + i)?;
                let phi = sigma.phi(&h);
                for x in &samples {
                    worst = worst.max(phi.unit_action_residual(w.t_index(), x));
                }
            }
            Ok(OpOutcome::of(worst))
        }
        other => Err(SpinLabError::Config(format!(
            "operation '{other}' not available on warped spaces"
        ))),
    }
}

fn execute_sasaki(entry: &TestMatrixEntry, bundle: SasakiBundle) -> Result<OpOutcome> {
    let backend = bundle.backend.clone();
    let samples = backend.sample_points(entry.samples.max(1), entry.seed);
    match entry.operation.as_str() {
        "curvature_oracle" => {
            let k = entry.expected.unwrap_or_else(|| bundle.einstein_k());
            let mut out = OpOutcome::of(backend.verify_einstein(&samples, k)?);
            out.fd_error = curvature_fd_error(&backend, &samples)?;
            Ok(out)
        }
        "sasaki_axioms" => {
            let ax = bundle.axioms(&samples)?;
            let residual = ax
                .eta_xi
                .max(ax.phi_square)
                .max(ax.phi_isometry)
                .max(ax.compatibility)
                .max(ax.reeb_derivative);
            let mut out = OpOutcome::of(residual);
            out.values
                .insert("nondegeneracy".into(), fmt_f64(ax.nondegeneracy));
            if ax.nondegeneracy < 0.5 {
                out.hard_failure = Some(format!(
                    "contact nondegeneracy {} below threshold 0.5",
                    ax.nondegeneracy
                ));
            }
            Ok(out)
        }
        "reeb_curvature" => {
            let mut out = OpOutcome::of(bundle.reeb_curvature_residual(&samples)?);
            out.fd_error = curvature_fd_error(&backend, &samples)?;
            Ok(out)
        }
        "connection_lift" => {
            let r = bundle.connection_lift(&samples)?;
            Ok(OpOutcome::of(
                r.bracket.max(r.horizontal).max(r.mixed).max(r.vertical),
            ))
        }
        "laplacian_lift" => {
            let mut worst: f64 = 0.0;
            for (i, x) in samples.iter().take(2).enumerate() {
                let h = field_for(
                    &bundle.base.backend,
                    &entry.field_family,
                    entry.seed + i as u64,
                )?;
                let lifted = bundle.lift(&h);
                let r = bundle.laplacian_lift(&h, &lifted, x)?;
                worst = worst
                    .max(r.iterated_sum)
                    .max(r.transport_sum)
                    .max(r.xi_xi)
                    .max(r.combined);
            }
            let mut out = OpOutcome::of(worst);
            out.fd_error = curvature_fd_error(&backend, &samples)?;
            Ok(out)
        }
        "curvature_lift" => {
            let mut worst: f64 = 0.0;
            for (i, x) in samples.iter().take(2).enumerate() {
                let h = field_for(
                    &bundle.base.backend,
                    &entry.field_family,
                    entry.seed + i as u64,
                )?;
                let lifted = bundle.lift(&h);
                let r = bundle.curvature_lift(&h, &lifted, x)?;
                worst = worst
                    .max(r.mixed)
                    .max(r.horizontal)
                    .max(r.ricci)
                    .max(r.curvature_action);
            }
            let mut out = OpOutcome::of(worst);
            out.fd_error = curvature_fd_error(&backend, &samples)?;
            Ok(out)
        }
        "einstein_lift" => {
            let mut out = OpOutcome::of(0.0);
            for (i, x) in samples.iter().take(2).enumerate() {
                let h = field_for(
                    &bundle.base.backend,
                    &entry.field_family,
                    entry.seed + i as u64,
                )?;
                let lifted = bundle.lift(&h);
                let check = bundle.einstein_lift(&h, &lifted, x)?;
                out.residual = out.residual.max(check.relative_residual);
                if check.inequality_margin < -1e-10 {
                    out.hard_failure = Some(format!(
                        "⟨h∘J,h⟩ ≤ ⟨h,h⟩ violated (margin {})",
                        check.inequality_margin
                    ));
                }
            }
            out.fd_error = curvature_fd_error(&backend, &samples)?;
            Ok(out)
        }
        "lift_tt" => {
            let h = field_for(&bundle.base.backend, &entry.field_family, entry.seed)?;
            let base_samples = bundle.base.backend.sample_points(entry.samples, entry.seed);
            let (report, xi_div) =
                bundle.lift_tt_report(&h, &base_samples, &samples, entry.tolerance)?;
            let mut out = OpOutcome::of(report.max_trace.max(report.max_divergence).max(xi_div));
            out.values
                .insert("xi_divergence".into(), fmt_f64(xi_div));
            Ok(out)
        }
        "certificate" => {
            let cert = instability_certificate(1, 1, entry.samples, entry.seed)?;
            let numeric = cert.numeric.as_ref().ok_or_else(|| {
                SpinLabError::Precondition("certificate numeric cross-check missing".into())
            })?;
            let residual = (numeric.base_quadratic_max_dev / cert.base_value.abs())
                .max(numeric.lifted_quadratic_max_dev / cert.lifted_value.abs());
            let mut out = OpOutcome::of(residual);
            out.values
                .insert("base_value".into(), fmt_f64(cert.base_value));
            out.values
                .insert("lifted_value".into(), fmt_f64(cert.lifted_value));
            out.values
                .insert("h_norm_sq".into(), fmt_f64(cert.h_norm_sq));
            out.values
                .insert("rayleigh_quotient".into(), fmt_f64(cert.rayleigh_quotient));
            out.values.insert(
                "verdict".into(),
                if cert.unstable { "UNSTABLE" } else { "stable" }.into(),
            );
            if !cert.unstable {
                out.hard_failure = Some("expected verdict UNSTABLE".into());
            }
            Ok(out)
        }
        other => Err(SpinLabError::Config(format!(
            "operation '{other}' not available on circle bundles"
        ))),
    }
}

/// Shipped suite configs, embedded so the CLI works from any directory.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.json");
pub const NEGATIVE_CONTROL_CONFIG: &str = include_str!("../configs/negative_control.json");
pub const CONFIG_SCHEMA: &str = include_str!("../schemas/config.schema.json");
pub const REPORT_SCHEMA: &str = include_str!("../schemas/report.schema.json");

/// Resolve a suite argument: a built-in name or a filesystem path.
pub fn resolve_suite(arg: &str) -> Result<SuiteConfig> {
    match arg {
        "default" => SuiteConfig::parse(DEFAULT_CONFIG),
        "negative-control" => SuiteConfig::parse(NEGATIVE_CONTROL_CONFIG),
        path => SuiteConfig::load(std::path::Path::new(path)),
    }
}

/// Human-readable catalog listing for the CLI.
pub fn catalog_listing() -> String {
    let mut s = String::new();
    s.push_str("spaces:\n");
    s.push_str("  {\"family\":\"s3\"}                                    unit round 3-sphere (exact frame algebra)\n");
    s.push_str("  {\"family\":\"warped_flat\",\"fiber_dim\":m,\"nu\":v}      warped product over flat R^m, rate v\n");
    s.push_str("  {\"family\":\"sasaki\",\"base\":\"S2|S2xS2|CP2\",\"k\":k}    circle bundle over a Kaehler-Einstein base\n");
    s.push_str("operations:\n");
    s.push_str("  s3:      curvature_oracle killing_residual spinor_curvature bochner real_killing_identity spectral_gap homogeneous_integral\n");
    s.push_str("  warped:  curvature_oracle killing_residual spinor_curvature structure bochner phi_pairing t_action\n");
    s.push_str("  sasaki:  curvature_oracle sasaki_axioms reeb_curvature connection_lift laplacian_lift curvature_lift einstein_lift lift_tt certificate\n");
    s.push_str("field families: none metric random_constant random_tt polynomial product_direction\n");
    s.push_str("built-in suites: default, negative-control\n");
    s
}
