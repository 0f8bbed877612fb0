use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use super::config::{FieldKind, InstanceConfig, RunOptions};
use super::report::{
    coeff_list, BaeRecord, BaeSolutionRecord, CharacterRecord, RatFunRecord, RunReport, SpaceRecord, WronskiRecord,
};
use crate::algebra::{build_embedded_module, dimension_oracle, ModuleSpec};
use crate::bae::{
    base_level, factorized_operator, levels, newton_solve, root_coordinates_from_space, verify_eigenvector,
    NewtonOptions,
};
use crate::bethe::{ambient_coefficients, build_bethe_operator, sample_points};
use crate::error::{Error, Result};
use crate::polyring::{DiffOp, Poly, RatFun};
use crate::quasiexp::{
    annihilates, char_at_infinity, check_first_coefficient, expected_second_char, fundamental_data,
    indicial_from_cleared, membership_test, second_char_at_infinity, QuasiExpSpace,
};
use crate::scalar::{format_exact, ExactField, GaussRat, Rat, Scalar};
use crate::spectral::{
    character_distance, character_to_operator, count_distinct, cyclic_span_dimension, joint_diagonalize,
    kernel_from_operator, reconstruct_character, Spectrum, SpectralOptions,
};
use crate::util::multinomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Bae,
    Wronski,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Bae => "bae",
            Command::Wronski => "wronski",
            Command::Verify => "verify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectrum" => Ok(Command::Spectrum),
            "bae" => Ok(Command::Bae),
            "wronski" => Ok(Command::Wronski),
            "verify" => Ok(Command::Verify),
            other => Err(Error::InvalidInput(format!("unknown command `{other}`"))),
        }
    }
}

/// Runs one command on one instance. Failed checks are recorded in the report;
/// only malformed input or construction failures are errors.
pub fn run(command: Command, cfg: &InstanceConfig) -> Result<RunReport> {
    cfg.validate()?;
    match cfg.field()? {
        FieldKind::Rational => run_in::<Rat>(command, cfg, "rational"),
        FieldKind::Gaussian => run_in::<GaussRat>(command, cfg, "gaussian"),
    }
}

/// Runs independent instances in parallel; reports keep the input order.
pub fn run_batch(command: Command, cfgs: &[InstanceConfig]) -> Vec<Result<RunReport>> {
    cfgs.par_iter().map(|cfg| run(command, cfg)).collect()
}

fn run_in<F: ExactField>(command: Command, cfg: &InstanceConfig, field: &str) -> Result<RunReport> {
    let spec = cfg.spec::<F>()?;
    let mut report = RunReport::new(command.name(), cfg, field);
    let real = cfg.is_real()?;
    let opts = &cfg.options;
    match command {
        Command::Spectrum => {
            spectral_stage(&spec, opts, real, true, &mut report)?;
        }
        Command::Bae => {
            let stage = spectral_stage(&spec, opts, real, false, &mut report)?;
            bae_stage(&spec, opts, &stage, &mut report)?;
        }
        Command::Wronski => wronski_stage(cfg, &spec, opts, &mut report)?,
        Command::Verify => {
            let stage = spectral_stage(&spec, opts, real, true, &mut report)?;
            count_checks(&spec, &mut report);
            if opts.run_bae {
                bae_stage(&spec, opts, &stage, &mut report)?;
            }
            if opts.run_wronski && cfg.space.is_some() {
                wronski_stage(cfg, &spec, opts, &mut report)?;
            }
        }
    }
    Ok(report)
}

/// Outcome of the spectral stage, reused by the Bethe ansatz stage.
pub struct SpectralStage {
    pub spectrum: Spectrum,
    pub den: Poly<Complex64>,
    pub kernels: Vec<Option<QuasiExpSpace<Complex64>>>,
    /// Per character: kernel found and its root coordinates generic.
    pub generic: Vec<bool>,
}

fn seconds(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

fn spectral_stage<F: ExactField>(
    spec: &ModuleSpec<F>,
    opts: &RunOptions,
    real: bool,
    exact_checks: bool,
    report: &mut RunReport,
) -> Result<SpectralStage> {
    let t0 = Instant::now();
    let module = build_embedded_module(spec)?;
    let dim = module.dim();
    report.dimension = Some(dim);
    let oracle = dimension_oracle(spec) as usize;
    report.check(
        "dimension",
        "weight-space dimension equals the character-arithmetic count",
        dim == oracle,
        json!({ "dimension": dim, "oracle": oracle }),
    );
    let op = build_bethe_operator(&module)?;
    report.timings.insert("construction".into(), seconds(t0));

    if exact_checks {
        let t1 = Instant::now();
        report.check(
            "first coefficient",
            "B_1(u) = -sum_i (K_i + e_ii(u)) exactly",
            op.check_first_coefficient(&module)?,
            json!(null),
        );
        report.check(
            "twist at infinity",
            "B(u) at infinity has characteristic polynomial prod_i (α - K_i)",
            op.check_characteristic_at_infinity(spec.k())?,
            json!(null),
        );
        let poly = op.check_polynomiality(spec);
        report.check(
            "polynomiality",
            "B_i(u) prod_s (u - b_s)^{n_s} is polynomial with scalar local leading terms",
            poly.ok(),
            &poly,
        );
        let points = sample_points(spec.b(), 2, opts.samples);
        let defects = op.commutator_defects(&module, &points)?;
        report.check(
            "commutativity",
            "all commutators [B_i(u_m), B_j(u_m')] vanish exactly",
            defects == 0,
            json!({
                "points": points.iter().map(format_exact).collect::<Vec<_>>(),
                "nonzero_commutators": defects,
            }),
        );
        report.timings.insert("exact checks".into(), seconds(t1));
    }

    let t2 = Instant::now();
    let sopts = SpectralOptions {
        seed: opts.seed,
        tol_residual: opts.tol_residual,
        tol_cluster: opts.tol_cluster,
        samples: opts.samples,
        ..SpectralOptions::default()
    };
    let spectrum = joint_diagonalize(&op, spec.b(), &sopts)?;
    let den = spec.normalizer().to_c64();
    let chars = &spectrum.characters;
    let distinct = count_distinct(chars, &den, 1e-6)?;

    let max_residual = chars.iter().map(|c| c.residual).fold(0.0, f64::max);
    report.check(
        "character residuals",
        "every character vector is a joint eigenvector of the B_i(u_m)",
        max_residual <= opts.tol_residual,
        max_residual,
    );
    let h1 = trace_character(spec);
    let mut trace_err: f64 = 0.0;
    let mut shape_err: f64 = 0.0;
    for ch in chars {
        trace_err = trace_err.max(character_distance(&ch.h[..1], &h1, &den)?);
        shape_err = match reconstruct_character(&op, spec, &ch.vector, 1e-6) {
            Ok(h) => shape_err.max(character_distance(&h, &ch.h, &den)?),
            Err(_) => f64::INFINITY,
        };
    }
    report.check(
        "trace identity",
        "h_1(u) = -sum_i K_i - sum_s n_s/(u - b_s) on every character",
        trace_err <= 1e-8,
        trace_err,
    );
    report.check(
        "rational shape",
        "sampled Rayleigh quotients are rational of degree <= n over prod_s (u - b_s)^{n_s}",
        shape_err <= 1e-6,
        shape_err,
    );
    report.check(
        "character bound",
        "number of characters is at most the dimension",
        distinct <= dim,
        json!({ "characters": distinct, "dimension": dim }),
    );
    let multiplicities: Vec<usize> = chars.iter().map(|c| c.multiplicity).collect();
    if real {
        report.check(
            "character count",
            "distinct real data: the number of characters equals the dimension",
            distinct == dim,
            json!({ "characters": distinct, "dimension": dim }),
        );
        report.check(
            "simple spectrum",
            "distinct real data: every joint eigenspace is one-dimensional",
            spectrum.simple(),
            &multiplicities,
        );
    } else {
        report.info(
            "character count",
            "number of characters (complex data, no equality expected)",
            json!({ "characters": distinct, "dimension": dim }),
        );
        report.info("simple spectrum", "joint eigenspace multiplicities", &multiplicities);
    }
    report.info(
        "diagonalizable",
        "generalized and proper joint eigenspaces agree",
        spectrum.diagonalizable(),
    );
    if dim <= 12 && real {
        let pts = sample_points(spec.b(), 13, opts.samples);
        let mats = (1..=op.rank())
            .flat_map(|i| pts.iter().map(move |u| (i, u)))
            .map(|(i, u)| op.eval(i, u).map(|m| m.to_c64()))
            .collect::<Result<Vec<_>>>()?;
        let span = cyclic_span_dimension(&mats, opts.seed, 1e-8);
        report.check(
            "cyclic vector",
            "a generic vector generates the whole space under the Bethe algebra",
            span == dim,
            json!({ "span": span, "dimension": dim }),
        );
    }
    report.timings.insert("spectrum".into(), seconds(t2));

    let t3 = Instant::now();
    let spec_c = spec.map(Scalar::to_c64);
    let mut kernels = Vec::new();
    let mut generic = Vec::new();
    let mut kernels_ok = true;
    let mut members_ok = true;
    let mut worst_wr: f64 = 0.0;
    for ch in chars {
        let d = character_to_operator(ch);
        let mut rec = CharacterRecord {
            h: ch.h.iter().map(|f| RatFunRecord::over(f, &den)).collect(),
            residual: ch.residual,
            multiplicity: ch.multiplicity,
            eigen_dim: ch.eigen_dim,
            kernel: None,
            kernel_failure: None,
            membership: None,
            generic: None,
        };
        match kernel_from_operator(&d, spec, opts.tol_kernel) {
            Ok(x) => {
                let m = membership_test(&x, &spec_c, opts.tol_kernel)?;
                members_ok &= m.member;
                worst_wr = worst_wr.max(m.wronskian_rel_error);
                rec.membership = Some(serde_json::to_value(&m)?);
                rec.kernel = Some(space_record(&x));
                let g = spec.is_vector_case()
                    && root_coordinates_from_space(&x).is_ok_and(|t| t.check_generic(1e-6).is_ok());
                if spec.is_vector_case() {
                    rec.generic = Some(g);
                }
                generic.push(g);
                kernels.push(Some(x));
            }
            Err(e) => {
                kernels_ok = false;
                rec.kernel_failure = Some(e.to_string());
                generic.push(false);
                kernels.push(None);
            }
        }
        report.characters.push(rec);
    }
    report.check(
        "kernel recovery",
        "every character operator has a quasi-exponential kernel of degrees λ",
        kernels_ok,
        json!(kernels.iter().filter(|k| k.is_some()).count()),
    );
    report.check(
        "membership",
        "every recovered kernel has Wronskian prod_s (u - b_s)^{n_s} and exponents λ^(s)_j + N - j at b_s",
        kernels_ok && members_ok,
        json!({ "max_wronskian_rel_error": worst_wr }),
    );
    report.timings.insert("kernels".into(), seconds(t3));
    Ok(SpectralStage { spectrum, den, kernels, generic })
}

/// `-sum_i K_i - sum_s n_s / (u - b_s)`.
fn trace_character<F: Scalar>(spec: &ModuleSpec<F>) -> Vec<RatFun<Complex64>> {
    let total = spec.k().iter().fold(Complex64::new(0.0, 0.0), |a, k| a + k.to_c64());
    let mut acc = RatFun::constant(-total);
    for s in 0..spec.factors() {
        let n = Complex64::new(spec.n_s(s) as f64, 0.0);
        acc = &acc - &RatFun::simple_pole(n, &spec.b()[s].to_c64());
    }
    vec![acc]
}

fn space_record(x: &QuasiExpSpace<Complex64>) -> SpaceRecord {
    SpaceRecord {
        k: x.k().iter().map(|z| [z.re, z.im]).collect(),
        polys: x.polys().iter().map(coeff_list).collect(),
    }
}

fn count_checks<F: Scalar>(spec: &ModuleSpec<F>, report: &mut RunReport) {
    if !spec.is_vector_case() {
        return;
    }
    let lam = spec.weight().padded(spec.rank());
    let count = multinomial(&lam) as usize;
    let dim = report.dimension.unwrap_or(0);
    report.check(
        "Wronski degree",
        "vector representations: dimension equals the multinomial count of the Wronski fiber",
        dim == count,
        json!({ "dimension": dim, "multinomial": count }),
    );
}

fn bae_stage<F: ExactField>(
    spec: &ModuleSpec<F>,
    opts: &RunOptions,
    stage: &SpectralStage,
    report: &mut RunReport,
) -> Result<()> {
    if !spec.is_vector_case() {
        report.info(
            "Bethe ansatz",
            "Bethe ansatz solving",
            "skipped: every factor must be the vector representation",
        );
        return Ok(());
    }
    let t0 = Instant::now();
    let k: Vec<Complex64> = spec.k().iter().map(Scalar::to_c64).collect();
    let sizes = levels(spec.rank(), spec.weight());
    let expected = report.dimension.unwrap_or(1);
    let nopts = NewtonOptions { seed: opts.seed, tol_dedup: opts.tol_dedup, ..NewtonOptions::default() };
    let out = newton_solve(&base_level(spec)?, &k, &sizes, expected, &nopts)?;
    let coeffs: Vec<_> = ambient_coefficients(spec)?.iter().map(|c| c.to_c64()).collect();
    let twist = Poly::from_roots(k.iter());
    let chars = &stage.spectrum.characters;

    let mut records = Vec::new();
    let mut eigen_ok = true;
    let mut eigen_worst: f64 = 0.0;
    let mut infinity_ok = true;
    let mut matched = vec![0usize; chars.len()];
    let mut match_worst: f64 = 0.0;
    let mut all_matched = true;
    for (t, &res) in out.solutions.iter().zip(&out.residuals) {
        let ev = verify_eigenvector(&coeffs, spec, t, opts.samples, 1e-8)?;
        eigen_ok &= ev.ok;
        eigen_worst = eigen_worst.max(ev.max_residual);
        let d = factorized_operator(t, &k);
        infinity_ok &= char_at_infinity(&d).is_ok_and(|c| c.approx_eq(&twist, 1e-10));
        let h: Vec<RatFun<Complex64>> = (1..=spec.rank()).map(|i| d.h(i)).collect();
        let best = chars
            .iter()
            .enumerate()
            .filter_map(|(idx, ch)| character_distance(&h, &ch.h, &stage.den).ok().map(|dist| (idx, dist)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let (matched_character, match_distance) = match best {
            Some((idx, dist)) if dist <= 1e-8 => {
                matched[idx] += 1;
                match_worst = match_worst.max(dist);
                (Some(idx), Some(dist))
            }
            other => {
                all_matched = false;
                (None, other.map(|(_, dist)| dist))
            }
        };
        records.push(BaeSolutionRecord {
            levels: t.levels.iter().map(|l| l.iter().map(|z| [z.re, z.im]).collect()).collect(),
            residual: res,
            eigenvector_residual: ev.max_residual,
            matched_character,
            match_distance,
        });
    }
    let n_solutions = out.solutions.len();
    report.check(
        "weight function eigenvectors",
        "ω(t) is a joint eigenvector with eigenvalues from the factorized operator",
        eigen_ok,
        eigen_worst,
    );
    report.check(
        "factorized operator at infinity",
        "the factorized operator has characteristic polynomial prod_i (α - K_i) at infinity",
        infinity_ok,
        json!(null),
    );
    report.check(
        "Bethe operators match characters",
        "each factorized operator coincides with the operator of one spectral character",
        all_matched && matched.iter().all(|&m| m <= 1),
        match_worst,
    );
    let generic_chars = stage.generic.iter().filter(|&&g| g).count();
    let generic_matched = matched.iter().zip(&stage.generic).all(|(&m, &g)| m == usize::from(g));
    report.check(
        "Bethe completeness",
        "Bethe solutions are in bijection with the characters whose kernels are generic",
        all_matched && generic_matched && n_solutions == generic_chars,
        json!({
            "solutions": n_solutions,
            "generic_characters": generic_chars,
            "characters": chars.len(),
        }),
    );
    report.info(
        "Bethe count",
        "number of Bethe solutions next to the dimension",
        json!({ "solutions": n_solutions, "dimension": report.dimension }),
    );
    report.bae = Some(BaeRecord { stats: serde_json::to_value(&out.stats)?, solutions: records });
    report.timings.insert("bethe ansatz".into(), seconds(t0));
    Ok(())
}

fn wronski_stage<F: ExactField>(
    cfg: &InstanceConfig,
    spec: &ModuleSpec<F>,
    opts: &RunOptions,
    report: &mut RunReport,
) -> Result<()> {
    let t0 = Instant::now();
    let x: QuasiExpSpace<F> = cfg
        .space_of()?
        .ok_or_else(|| Error::InvalidInput("the config has no `space` to analyse".into()))?;
    let lam = spec.weight().padded(spec.rank());
    report.check(
        "space degrees",
        "the polynomial parts have degrees λ",
        x.degrees() == lam,
        json!({ "degrees": x.degrees(), "weight": lam }),
    );
    let data = fundamental_data(&x)?;
    let d = &data.operator;
    report.check(
        "kernel of D_X",
        "the fundamental operator annihilates the space exactly",
        annihilates(d, &x, 0.0),
        json!(null),
    );
    report.check(
        "first coefficient of D_X",
        "F_1 = -Wr'/Wr",
        check_first_coefficient(&data, x.k(), 0.0),
        json!(null),
    );
    let chi = char_at_infinity(d)?;
    report.check(
        "D_X at infinity",
        "leading layer at infinity is prod_i (α - K_i)",
        chi == Poly::from_roots(x.k().iter()),
        json!(null),
    );
    let chi2 = second_char_at_infinity(d)?;
    report.check(
        "D_X second layer",
        "next layer at infinity is -sum_i λ_i prod_{j != i} (α - K_j)",
        chi2 == expected_second_char(x.k(), &x.degrees()),
        json!(null),
    );

    let m = membership_test(&x, spec, 0.0)?;
    report.check(
        "membership",
        "Wronskian prod_s (u - b_s)^{n_s} and exponents λ^(s)_j + N - j at every b_s",
        m.member,
        &m,
    );
    let mut indicial = Vec::new();
    for s in 0..spec.factors() {
        let b = &spec.b()[s];
        let entry = match indicial_from_cleared(&data.cleared, b, spec.n_s(s), 0.0) {
            Ok(ind) => json!({
                "point": format_exact(b),
                "polynomial": ind.polynomial.coeffs().iter().map(format_exact).collect::<Vec<_>>(),
                "exponents": ind.exponents.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "point": format_exact(b), "failure": e.to_string() }),
        };
        indicial.push(entry);
    }

    let dc = DiffOp::new(d.coeffs().iter().map(RatFun::to_c64).collect());
    let xc = x.to_c64();
    let round_trip = kernel_from_operator(&dc, spec, opts.tol_kernel).map(|y| {
        y.polys()
            .iter()
            .zip(xc.polys())
            .map(|(a, b)| (a - b).max_abs() / b.max_abs().max(1.0))
            .fold(0.0, f64::max)
    });
    report.check(
        "round trip",
        "the kernel of D_X recovers the polynomial parts",
        round_trip.as_ref().is_ok_and(|&e| e <= 1e-10),
        match &round_trip {
            Ok(e) => json!(e),
            Err(e) => json!(e.to_string()),
        },
    );

    let w = data.wronski.monic.to_c64();
    report.wronski = Some(WronskiRecord {
        wronskian: data.wronski.monic.coeffs().iter().map(format_exact).collect(),
        operator: (1..=spec.rank()).map(|i| RatFunRecord::over(&dc.h(i), &w)).collect(),
        membership: serde_json::to_value(&m)?,
        indicial,
    });
    report.timings.insert("wronski".into(), seconds(t0));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Status;

    fn config(text: &str) -> InstanceConfig {
        InstanceConfig::from_json(text).unwrap()
    }

    fn failures(r: &RunReport) -> Vec<String> {
        r.checks.iter().filter(|c| c.status == Status::Fail).map(|c| format!("{}: {}", c.name, c.value)).collect()
    }

    const TWO_POINTS: &str =
        r#"{"N": 2, "K": ["0", "1"], "partitions": [[1], [1]], "b": ["0", "1"], "weight": [1, 1]}"#;

    #[test]
    fn verify_passes_on_two_points() {
        let r = run(Command::Verify, &config(TWO_POINTS)).unwrap();
        assert!(failures(&r).is_empty(), "{:?}", failures(&r));
        assert_eq!(r.dimension, Some(2));
        assert_eq!(r.characters.len(), 2);
        assert_eq!(r.bae.as_ref().unwrap().solutions.len(), 2);
        assert!(r.get("Bethe completeness").is_some());
    }

    #[test]
    fn integer_twist_accounts_for_the_non_generic_point() {
        let r = run(
            Command::Bae,
            &config(r#"{"N": 2, "K": ["0", "1"], "partitions": [[1], [1], [1], [1]], "b": ["0", "1", "2", "3"], "weight": [2, 2]}"#),
        )
        .unwrap();
        assert!(failures(&r).is_empty(), "{:?}", failures(&r));
        assert_eq!(r.characters.len(), 6);
        assert_eq!(r.bae.as_ref().unwrap().solutions.len(), 5);
        assert_eq!(r.characters.iter().filter(|c| c.generic == Some(false)).count(), 1);
    }

    #[test]
    fn wronski_member_and_non_member() {
        let member = r#"{"N": 2, "K": ["0", "1"], "partitions": [[1], [1], [1], [1]], "b": ["0", "1", "2", "3"],
            "weight": [2, 2], "space": [["-4", "4"], ["-2", "1"]]}"#;
        let r = run(Command::Wronski, &config(member)).unwrap();
        assert!(failures(&r).is_empty(), "{:?}", failures(&r));
        assert_eq!(r.wronski.as_ref().unwrap().indicial.len(), 4);

        let outsider = member.replace(r#"["-2", "1"]"#, r#"["-2", "5"]"#);
        let r = run(Command::Wronski, &config(&outsider)).unwrap();
        assert_eq!(r.get("membership").unwrap().status, Status::Fail);
        assert_eq!(r.get("kernel of D_X").unwrap().status, Status::Pass);
    }

    #[test]
    fn batches_keep_order_and_are_deterministic() {
        let other = TWO_POINTS.replace(r#""K": ["0", "1"]"#, r#""K": ["0", "-2"]"#);
        let cfgs = vec![config(TWO_POINTS), config(&other)];
        let strip = |mut r: RunReport| {
            r.timings.clear();
            r.to_json()
        };
        let first: Vec<String> = run_batch(Command::Verify, &cfgs).into_iter().map(|r| strip(r.unwrap())).collect();
        let again: Vec<String> = run_batch(Command::Verify, &cfgs).into_iter().map(|r| strip(r.unwrap())).collect();
        assert_eq!(first, again);
        assert!(first[1].contains("\"-2\""));
    }

    #[test]
    fn wronski_needs_a_space() {
        assert!(run(Command::Wronski, &config(TWO_POINTS)).is_err());
    }

    #[test]
    fn higher_representations_skip_the_bethe_ansatz() {
        let r = run(
            Command::Verify,
            &config(r#"{"N": 2, "K": ["0", "1/3"], "partitions": [[2], [1]], "b": ["0", "1"], "weight": [2, 1]}"#),
        )
        .unwrap();
        assert!(failures(&r).is_empty(), "{:?}", failures(&r));
        assert_eq!(r.get("Bethe ansatz").unwrap().status, Status::Info);
    }

    #[test]
    fn complex_data_reports_counts_as_information() {
        let r = run(
            Command::Spectrum,
            &config(r#"{"N": 2, "K": ["0", "1+i"], "partitions": [[1], [1], [1]], "b": ["0", "i", "2"], "weight": [2, 1]}"#),
        )
        .unwrap();
        assert_eq!(r.field, "gaussian");
        assert!(failures(&r).is_empty(), "{:?}", failures(&r));
        assert_eq!(r.get("character count").unwrap().status, Status::Info);
    }

    #[test]
    fn command_names_round_trip() {
        for c in [Command::Spectrum, Command::Bae, Command::Wronski, Command::Verify] {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
        assert!("report".parse::<Command>().is_err());
    }
}
