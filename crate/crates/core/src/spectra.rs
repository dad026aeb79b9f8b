//! Bound-state scans, the `mα = ½` cutoff, magic radii, and comparison of
//! computed spectra against the published reference tables.

use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::{self, ModeSpec, Parity, DEFAULT_TRUNCATION};
use crate::eigensolver::{self, solve_spectrum, Spectrum};
use crate::error::{Error, Result};

/// Truncation used for table reproduction.
pub const TABLE_TRUNCATION: usize = DEFAULT_TRUNCATION;
pub const BETA_TOLERANCE: f64 = 2e-3;
pub const RATIO_TOLERANCE: f64 = 2e-2;
pub const NORM_TOLERANCE: f64 = 1e-3;
pub const SMALL_BETA_TOLERANCE: f64 = 5e-4;
pub const MAGIC_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundStateEntry {
    pub m: u32,
    pub parity: Parity,
    pub n_index: usize,
    pub beta: f64,
    pub degeneracy: u32,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundStateTable {
    pub alpha: f64,
    pub m_max: u32,
    pub entries: Vec<BoundStateEntry>,
    pub total_count_sectors: usize,
    pub total_count_with_degeneracy: usize,
}

impl BoundStateTable {
    pub fn bound_sectors(&self) -> Vec<u32> {
        let mut ms: Vec<u32> = self.entries.iter().map(|e| e.m).collect();
        ms.dedup();
        ms
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    /// Counts towards the overall verdict.
    Checked,
    /// Compared and reported, but the reference value is known to be wrong.
    Disputed,
    /// Reported without a reference value.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetResult {
    pub label: String,
    pub kind: TargetKind,
    pub reference: Option<f64>,
    pub computed: f64,
    pub diff: Option<f64>,
    pub tolerance: Option<f64>,
    pub relative: bool,
    pub pass: bool,
    pub note: String,
}

impl TargetResult {
    fn compare(label: impl Into<String>, reference: f64, computed: f64, tolerance: f64, relative: bool) -> Self {
        let diff = if relative {
            (computed - reference).abs() / reference.abs()
        } else {
            (computed - reference).abs()
        };
        Self {
            label: label.into(),
            kind: TargetKind::Checked,
            reference: Some(reference),
            computed,
            diff: Some(diff),
            tolerance: Some(tolerance),
            relative,
            pass: diff <= tolerance,
            note: String::new(),
        }
    }

    fn info(label: impl Into<String>, computed: f64, note: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            kind: TargetKind::Info,
            reference: None,
            computed,
            diff: None,
            tolerance: None,
            relative: false,
            pass: true,
            note: note.into(),
        }
    }

    fn disputed(mut self, note: impl Into<String>) -> Self {
        self.kind = TargetKind::Disputed;
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableDiffReport {
    pub title: String,
    pub targets: Vec<TargetResult>,
}

impl TableDiffReport {
    fn new(title: impl Into<String>) -> Self {
        Self { title: title.into(), targets: Vec::new() }
    }

    /// True iff every checked target passes.
    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failures(&self) -> impl Iterator<Item = &TargetResult> {
        self.targets
            .iter()
            .filter(|t| t.kind == TargetKind::Checked && !t.pass)
    }

    pub fn find(&self, label: &str) -> Option<&TargetResult> {
        self.targets.iter().find(|t| t.label == label)
    }
}

/// Reference bound state with `V_C` on (first table): the state is
/// `prefactor · [bracket_0 + bracket_1 cos θ + …]`.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceState {
    pub alpha: f64,
    pub m: u32,
    pub beta: f64,
    pub prefactor: f64,
    pub bracket: &'static [f64],
}

pub const CONSTRAINED_STATES: [ReferenceState; 7] = [
    ReferenceState { alpha: 0.75, m: 0, beta: -1.0725, prefactor: 0.1298, bracket: &[4.6072, -5.2143, 2.2465, -0.9495] },
    ReferenceState { alpha: 0.50, m: 0, beta: -0.3512, prefactor: 0.2455, bracket: &[2.4509, -0.9015, 0.1921] },
    ReferenceState { alpha: 0.25, m: 0, beta: -0.2673, prefactor: 0.3765, bracket: &[2.1458, -0.2916, 0.0280] },
    ReferenceState { alpha: 0.25, m: 1, beta: -0.1987, prefactor: 0.3826, bracket: &[2.1069, -0.2138, 0.0197] },
    ReferenceState { alpha: 0.05, m: 0, beta: -0.2506, prefactor: 0.8813, bracket: &[2.0254, -0.0508] },
    ReferenceState { alpha: 0.05, m: 1, beta: -0.2481, prefactor: 0.8814, bracket: &[2.0251, -0.0507] },
    ReferenceState { alpha: 0.05, m: 2, beta: -0.2406, prefactor: 0.8817, bracket: &[2.0244, -0.0487] },
];

/// Reference states of the free problem (second table).
pub const FREE_STATES: [ReferenceState; 7] = [
    ReferenceState { alpha: 0.75, m: 0, beta: 0.0, prefactor: 0.4607, bracket: &[1.0] },
    ReferenceState { alpha: 0.50, m: 0, beta: 0.0, prefactor: 0.5642, bracket: &[1.0] },
    ReferenceState { alpha: 0.25, m: 0, beta: 0.0, prefactor: 0.7979, bracket: &[1.0] },
    ReferenceState { alpha: 0.25, m: 1, beta: 0.0641, prefactor: 0.4073, bracket: &[1.9676, 0.0648] },
    ReferenceState { alpha: 0.05, m: 0, beta: 0.0, prefactor: 1.7841, bracket: &[1.0] },
    ReferenceState { alpha: 0.05, m: 1, beta: 0.0025, prefactor: 0.8822, bracket: &[1.9998, 0.0005] },
    ReferenceState { alpha: 0.05, m: 2, beta: 0.0010, prefactor: 0.8822, bracket: &[1.9996, 0.0002] },
];

/// Bound-state count quoted for `α = 1/20`.
pub const REFERENCE_COUNT_ALPHA_0_05: usize = 9;

/// Largest `m` with `2mα < 1`; sectors above it have no bound state and the
/// boundary `2mα = 1` itself is unbound.
pub fn cutoff_m(alpha: f64) -> Result<u32> {
    assembly::check_alpha(alpha)?;
    let mut m = (0.5 / alpha).floor() as u32;
    while m > 0 && m as f64 * alpha >= 0.5 {
        m -= 1;
    }
    while (m + 1) as f64 * alpha < 0.5 {
        m += 1;
    }
    Ok(m)
}

/// Lowest `β` of one sector at fixed truncation.
pub fn sector_minimum(alpha: f64, m: u32, parity: Parity, include_vc: bool, n_basis: usize) -> Result<f64> {
    let pair = assembly::assemble_sector(alpha, ModeSpec::new(m, parity, n_basis, include_vc)?)?;
    Ok(eigensolver::sector_eigenvalues(&pair)?[0])
}

/// Every `β < 0` state with the curvature potential on, for `m = 0..=m_max`
/// and both parities.
pub fn bound_state_scan(alpha: f64, m_max: u32) -> Result<BoundStateTable> {
    bound_state_scan_at(alpha, m_max, DEFAULT_TRUNCATION)
}

pub fn bound_state_scan_at(alpha: f64, m_max: u32, n_basis: usize) -> Result<BoundStateTable> {
    assembly::check_alpha(alpha)?;
    let sectors: Vec<(u32, Parity)> = (0..=m_max)
        .flat_map(|m| [(m, Parity::Even), (m, Parity::Odd)])
        .collect();
    let spectra = sectors
        .par_iter()
        .map(|&(m, parity)| solve_spectrum(alpha, ModeSpec::new(m, parity, n_basis, true)?))
        .collect::<Result<Vec<Spectrum>>>()?;
    let mut entries: Vec<BoundStateEntry> = spectra
        .iter()
        .flat_map(|s| s.states.iter().take_while(|st| st.beta < 0.0))
        .map(|st| BoundStateEntry {
            m: st.m,
            parity: st.parity(),
            n_index: st.n_index,
            beta: st.beta,
            degeneracy: st.degeneracy(),
            coeffs: st.coeffs().to_vec(),
        })
        .collect();
    entries.sort_by(|a, b| a.m.cmp(&b.m).then(a.beta.total_cmp(&b.beta)));
    let total_count_with_degeneracy = entries.iter().map(|e| e.degeneracy as usize).sum();
    Ok(BoundStateTable {
        alpha,
        m_max,
        total_count_sectors: entries.len(),
        total_count_with_degeneracy,
        entries,
    })
}

/// Compares the constrained `m` sector at `α = 1/(2m)` with the free `m = 0`
/// sector at the same `α`.
pub fn magic_radius_check(m: u32) -> Result<TableDiffReport> {
    magic_radius_check_at(m, DEFAULT_TRUNCATION)
}

pub fn magic_radius_check_at(m: u32, n_basis: usize) -> Result<TableDiffReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("magic radii start at m = 1".into()));
    }
    let alpha = 1.0 / (2.0 * m as f64);
    let mut report = TableDiffReport::new(format!("magic radius m = {m}, alpha = 1/{}", 2 * m));
    let constrained = assembly::assemble_full(alpha, m, n_basis, true)?;
    let free = assembly::assemble_full(alpha, 0, n_basis, false)?;
    let matrix_diff = (&constrained.a_matrix - &free.a_matrix)
        .amax()
        .max((&constrained.b_matrix - &free.b_matrix).amax());
    report
        .targets
        .push(TargetResult::compare("max |matrix entry difference|", 0.0, matrix_diff, 0.0, false));
    for parity in [Parity::Even, Parity::Odd] {
        let a = eigensolver::sector_eigenvalues(&assembly::parity_project(&constrained, parity))?;
        let b = eigensolver::sector_eigenvalues(&assembly::parity_project(&free, parity))?;
        let diff = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        report.targets.push(TargetResult::compare(
            format!("{parity} spectrum max |diff|"),
            0.0,
            diff,
            MAGIC_TOLERANCE,
            false,
        ));
        report.targets.push(TargetResult::info(
            format!("{parity} lowest beta"),
            a[0],
            "constrained sector ground state",
        ));
    }
    Ok(report)
}

fn ground(alpha: f64, m: u32, include_vc: bool) -> Result<eigensolver::Eigenstate> {
    let spec = ModeSpec::new(m, Parity::Even, TABLE_TRUNCATION, include_vc)?;
    let s = solve_spectrum(alpha, spec)?;
    s.states
        .into_iter()
        .next()
        .ok_or_else(|| Error::SolverFailure("empty spectrum".into()))
}

fn push_wavefunction(
    report: &mut TableDiffReport,
    tag: &str,
    reference: &ReferenceState,
    coeffs: &[f64],
    lead_disputed: Option<&str>,
    ratios_disputed: Option<&str>,
) {
    let lead = reference.prefactor * reference.bracket[0];
    let t = TargetResult::compare(format!("{tag} c0"), lead, coeffs[0], RATIO_TOLERANCE, true);
    report.targets.push(match lead_disputed {
        Some(note) => t.disputed(note),
        None => t,
    });
    for (j, b) in reference.bracket.iter().enumerate().skip(1) {
        let t = TargetResult::compare(
            format!("{tag} c{j}/c0"),
            b / reference.bracket[0],
            coeffs[j] / coeffs[0],
            RATIO_TOLERANCE,
            true,
        );
        report.targets.push(match ratios_disputed {
            Some(note) => t.disputed(note),
            None => t,
        });
    }
}

/// Recomputes every eigenvalue and wavefunction coefficient of both
/// reference tables at truncation 64.
pub fn reproduce_tables() -> Result<TableDiffReport> {
    let mut report = TableDiffReport::new("reference tables");

    let constrained = CONSTRAINED_STATES
        .par_iter()
        .map(|r| ground(r.alpha, r.m, true))
        .collect::<Result<Vec<_>>>()?;
    for (r, st) in CONSTRAINED_STATES.iter().zip(&constrained) {
        let tag = format!("vc alpha={} m={}", r.alpha, r.m);
        report
            .targets
            .push(TargetResult::compare(format!("{tag} beta"), r.beta, st.beta, BETA_TOLERANCE, false));
        // The α = 0.75 row is not normalized under its own stated measure
        // (its listed series integrates to 1.158).
        let lead_note = (r.alpha == 0.75).then_some("listed series has norm^2 = 1.158, not 1");
        push_wavefunction(&mut report, &tag, r, st.coeffs(), lead_note, None);
        if r.m == 0 {
            // Two candidate free states to compare the bound ground state with.
            report.targets.push(TargetResult::info(
                format!("{tag} free comparison: constant state beta"),
                0.0,
                "chosen comparison state",
            ));
            let free = solve_spectrum(r.alpha, ModeSpec::new(0, Parity::Even, TABLE_TRUNCATION, false)?)?;
            let first_excited = free.states.iter().find(|s| s.beta.abs() > 1e-8).map_or(f64::NAN, |s| s.beta);
            report.targets.push(TargetResult::info(
                format!("{tag} free comparison: lowest nonzero beta"),
                first_excited,
                "alternative comparison state",
            ));
        }
    }

    let free = FREE_STATES
        .par_iter()
        .map(|r| ground(r.alpha, r.m, false))
        .collect::<Result<Vec<_>>>()?;
    for (r, st) in FREE_STATES.iter().zip(&free) {
        let tag = format!("free alpha={} m={}", r.alpha, r.m);
        if r.m == 0 {
            report.targets.push(TargetResult::compare(format!("{tag} beta"), 0.0, st.beta, 1e-10, false));
            report.targets.push(TargetResult::compare(
                format!("{tag} norm"),
                r.prefactor,
                st.wavefunction.norm_constant,
                NORM_TOLERANCE,
                false,
            ));
            continue;
        }
        let small = r.alpha * r.alpha * (r.m * r.m) as f64;
        let typo = r.alpha == 0.05 && r.m == 2;
        if typo {
            report.targets.push(
                TargetResult::compare(format!("{tag} beta (listed)"), r.beta, st.beta, SMALL_BETA_TOLERANCE, false)
                    .disputed("listed 0.0010; the free spectrum requires about m^2 alpha^2 = 0.0100"),
            );
            report.targets.push(TargetResult::compare(
                format!("{tag} beta"),
                small,
                st.beta,
                SMALL_BETA_TOLERANCE,
                false,
            ));
        } else {
            let tol = if r.alpha == 0.05 { SMALL_BETA_TOLERANCE } else { BETA_TOLERANCE };
            report
                .targets
                .push(TargetResult::compare(format!("{tag} beta"), r.beta, st.beta, tol, false));
        }
        let note = typo.then_some("row shares the suspected typo of its eigenvalue");
        push_wavefunction(&mut report, &tag, r, st.coeffs(), None, note);
    }
    Ok(report)
}

/// Bound-state count at `alpha` against the quoted count and the
/// constant-trial-function prediction (`m ≤ cutoff_m`).
pub fn count_report(alpha: f64, m_max: u32, quoted: Option<usize>) -> Result<TableDiffReport> {
    let table = bound_state_scan(alpha, m_max)?;
    let predicted_sectors = (cutoff_m(alpha)?.min(m_max) + 1) as f64;
    let mut report = TableDiffReport::new(format!("bound-state count, alpha = {alpha}, m <= {m_max}"));
    report.targets.push(TargetResult::compare(
        "bound (m, parity, n) entries vs variational prediction",
        predicted_sectors,
        table.total_count_sectors as f64,
        0.0,
        false,
    ));
    if let Some(q) = quoted {
        report.targets.push(
            TargetResult::compare("bound entries vs quoted total", q as f64, table.total_count_sectors as f64, 0.0, false)
                .disputed("quoted total disagrees with the variational bound for every m with 2m alpha < 1"),
        );
    }
    report.targets.push(TargetResult::info(
        "bound states counting +/-m degeneracy",
        table.total_count_with_degeneracy as f64,
        "",
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_values() {
        assert_eq!(cutoff_m(0.75).unwrap(), 0);
        assert_eq!(cutoff_m(0.5).unwrap(), 0);
        assert_eq!(cutoff_m(0.25).unwrap(), 1);
        assert_eq!(cutoff_m(0.24).unwrap(), 2);
        assert_eq!(cutoff_m(0.05).unwrap(), 9);
        assert_eq!(cutoff_m(1.0 / 6.0).unwrap(), 2);
        assert!(cutoff_m(0.0).is_err());
    }

    #[test]
    fn scan_quarter() {
        let t = bound_state_scan(0.25, 2).unwrap();
        assert_eq!(t.bound_sectors(), vec![0, 1]);
        assert_eq!(t.total_count_sectors, 2);
        assert_eq!(t.total_count_with_degeneracy, 3);
        assert!((t.entries[0].beta + 0.2673).abs() < BETA_TOLERANCE);
        assert!((t.entries[1].beta + 0.1987).abs() < BETA_TOLERANCE);
        assert!(t.entries.iter().all(|e| e.parity == Parity::Even));
    }

    #[test]
    fn scan_fat_torus_binds_only_m0() {
        let t = bound_state_scan(0.75, 3).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries[0].m, 0);
        assert!((t.entries[0].beta + 1.0749137).abs() < 1e-6);
    }

    #[test]
    fn scan_thin_torus() {
        let t = bound_state_scan(0.05, 12).unwrap();
        for (m, beta) in [(0, -0.2506), (1, -0.2481), (2, -0.2406)] {
            let e = t.entries.iter().find(|e| e.m == m).unwrap();
            assert!((e.beta - beta).abs() < BETA_TOLERANCE);
        }
        assert_eq!(t.bound_sectors(), (0..=9).collect::<Vec<_>>());
    }

    #[test]
    fn magic_radius_half() {
        let r = magic_radius_check(1).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.targets[0].computed, 0.0);
        assert!(sector_minimum(0.5, 1, Parity::Even, true, 32).unwrap().abs() < 1e-10);
        assert!(magic_radius_check(0).is_err());
    }

    #[test]
    fn magic_radii_higher() {
        for m in 2..=4 {
            assert!(magic_radius_check(m).unwrap().all_pass());
        }
    }

    #[test]
    fn binding_weakens_with_m() {
        for alpha in [0.05, 0.1, 0.2] {
            let t = bound_state_scan(alpha, 12).unwrap();
            let mags: Vec<f64> = t.entries.iter().map(|e| e.beta.abs()).collect();
            assert!(mags.windows(2).all(|w| w[0] > w[1]), "{alpha}: {mags:?}");
        }
    }

    #[test]
    fn fatter_tori_bind_deeper() {
        let betas: Vec<f64> = [0.05, 0.25, 0.5, 0.75]
            .iter()
            .map(|&a| sector_minimum(a, 0, Parity::Even, true, 64).unwrap())
            .collect();
        assert!(betas.windows(2).all(|w| w[0] > w[1]), "{betas:?}");
    }

    #[test]
    fn count_at_thin_torus_flags_quoted_value() {
        let r = count_report(0.05, 12, Some(REFERENCE_COUNT_ALPHA_0_05)).unwrap();
        assert!(r.all_pass());
        let quoted = r.find("bound entries vs quoted total").unwrap();
        assert_eq!(quoted.kind, TargetKind::Disputed);
        assert!(!quoted.pass);
        assert_eq!(quoted.computed, 10.0);
    }

    #[test]
    fn report_marks_typo_row() {
        let r = reproduce_tables().unwrap();
        let listed = r.find("free alpha=0.05 m=2 beta (listed)").unwrap();
        assert_eq!(listed.kind, TargetKind::Disputed);
        assert!(!listed.pass);
        assert!(r.find("free alpha=0.05 m=2 beta").unwrap().pass);
        assert!(r.find("vc alpha=0.5 m=0 c1/c0").unwrap().pass);
    }
}
