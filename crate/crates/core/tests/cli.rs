use std::path::Path;
use std::process::{Command, Output};

use beta_ensemble::cli::{Envelope, FluctuationReport, MomentRow};
use beta_ensemble::distributions::sym_beta_moments;
use beta_ensemble::ensembles::{CoefficientLaw, EnsembleSpec};
use beta_ensemble::rng::THREADS_ENV;
use beta_ensemble::statistics::{run_fluctuation_experiment, summarize, Normalization};

/// The second arc endpoint of the reference example, as typed on the command line.
#[allow(clippy::approx_constant)]
const EXAMPLE_ANGLE: f64 = 1.5708;

const BIN: &str = env!("CARGO_BIN_EXE_beta-ensemble");

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove(THREADS_ENV).env("SOURCE_DATE_EPOCH", "1700000000");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn ok(args: &[&str], envs: &[(&str, &str)]) -> Vec<u8> {
    let out = run(args, envs);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const FLUCT: [&str; 11] = [
    "fluctuations", "--ensemble", "circular", "--n", "4096", "--trials", "2000", "--thetas", "0,1.5708", "--seed", "7",
];

#[test]
fn fluctuation_csv_is_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, (flag, env)) in [(Some("1"), None), (Some("4"), None), (None, Some("3"))].into_iter().enumerate() {
        let file = dir.path().join(format!("run{i}.csv"));
        let mut args: Vec<&str> = FLUCT.to_vec();
        args.extend(["--out", path_str(&file)]);
        if let Some(p) = flag {
            args.extend(["--parallel", p]);
        }
        let envs: Vec<(&str, &str)> = env.map(|e| (THREADS_ENV, e)).into_iter().collect();
        assert!(ok(&args, &envs).is_empty());
        outputs.push(std::fs::read(&file).unwrap());
        assert!(dir.path().join(format!("run{i}.csv.report.json")).exists());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));

    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("trial,theta_lo,theta_hi,count,normalized"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2000);
    // the arc holds about a quarter of the points
    let c: usize = rows[0].split(',').nth(3).unwrap().parse().unwrap();
    assert!((900..1150).contains(&c), "{c}");
}

#[test]
fn json_report_matches_the_library_bit_for_bit() {
    let mut args = FLUCT.to_vec();
    args.extend(["--format", "json"]);
    let env: Envelope<FluctuationReport> = serde_json::from_slice(&ok(&args, &[])).unwrap();
    assert_eq!(env.provenance.timestamp, 1_700_000_000);
    assert_eq!(env.provenance.seed, 7);
    assert_eq!(env.config.thetas, vec![0.0, EXAMPLE_ANGLE]);

    let spec = EnsembleSpec::circular(4096, 2.0).unwrap();
    let sample = run_fluctuation_experiment(&spec, &[0.0, EXAMPLE_ANGLE], 2000, 7, Normalization::Theorem, None).unwrap();
    let summary = summarize(&sample).unwrap();
    assert_eq!(env.report.sample.values, sample.values);
    assert_eq!(env.report.sample.counts, sample.counts);
    assert_eq!(env.report.summary.unwrap(), summary);
}

#[test]
fn report_is_reproducible_under_a_fixed_epoch() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for i in 0..2 {
        let file = dir.path().join(format!("f{i}.csv"));
        ok(
            &["fluctuations", "--ensemble", "jacobi", "--n", "128", "--trials", "300", "--thetas", "1,2", "--out", path_str(&file)],
            &[],
        );
        reports.push(std::fs::read(dir.path().join(format!("f{i}.csv.report.json"))).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let v: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(v["provenance"]["timestamp"], 1_700_000_000);
    assert_eq!(v["report"]["limit_variance"], 1.0);
}

#[test]
fn plot_script_points_at_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fl.csv");
    ok(
        &["fluctuations", "--n", "64", "--trials", "100", "--thetas", "-1,0,1", "--out", path_str(&file), "--emit-plot-script"],
        &[],
    );
    let script = std::fs::read_to_string(dir.path().join("fl.csv.gp")).unwrap();
    assert!(script.contains(path_str(&file)));
    assert_eq!(script.matches("plot '").count(), 3);

    // without --out there is nowhere to put it
    let out = run(&["fluctuations", "--emit-plot-script"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn jacobi_moment_table_has_the_closed_forms() {
    let out = ok(
        &["moments", "--ensemble", "jacobi", "--n", "3", "--beta", "1", "--a", "1", "--b", "2", "--trials", "20000", "--format", "json"],
        &[],
    );
    let env: Envelope<Vec<MomentRow>> = serde_json::from_slice(&out).unwrap();
    assert_eq!(env.report.len(), 5 * 4);
    for row in &env.report {
        let m = sym_beta_moments(CoefficientLaw::jacobi_param(1.0, 1.0, 2.0, row.k));
        let want = match row.moment.as_str() {
            "m1" => m.m1,
            "m2" => m.m2,
            "m3" => m.m3,
            "m4" => m.m4,
            other => panic!("unexpected moment {other}"),
        };
        assert_eq!(row.closed_form, want);
        assert!((row.monte_carlo - want).abs() < 5.0 * row.standard_error, "{row:?}");
    }
}

#[test]
fn sample_and_count_agree() {
    let pts = String::from_utf8(ok(&["sample", "--n", "30", "--trials", "5", "--seed", "3"], &[])).unwrap();
    let counts = String::from_utf8(ok(&["count", "--n", "30", "--trials", "5", "--seed", "3", "--thetas", "-3.1,3.1"], &[])).unwrap();
    let data = |s: &str| s.lines().filter(|l| !l.starts_with('#')).skip(1).map(str::to_owned).collect::<Vec<_>>();
    let pts = data(&pts);
    assert_eq!(pts.len(), 150);
    for (t, line) in data(&counts).iter().enumerate() {
        let c: usize = line.rsplit(',').next().unwrap().parse().unwrap();
        let inside = pts
            .iter()
            .filter(|l| l.starts_with(&format!("{t},")))
            .filter(|l| {
                let p: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
                -3.1 < p && p <= 3.1
            })
            .count();
        assert_eq!(c, inside);
    }
}

#[test]
fn diagnostics_rows_cover_the_grid() {
    let out = String::from_utf8(ok(&["diagnostics", "--n", "256", "--trials", "20", "--beta", "4"], &[])).unwrap();
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    // 5 statistics on the grid 16, 64, 256
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().any(|r| r.starts_with("stability_diagonal,256,")));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["fluctuations", "--beta", "-1"], &[]).status.code(), Some(1));
    assert_eq!(run(&["count", "--ensemble", "jacobi", "--thetas", "4"], &[]).status.code(), Some(1));
    assert_eq!(run(&["nonsense"], &[]).status.code(), Some(1));
    assert_eq!(run(&["--version"], &[]).status.code(), Some(0));
    let out = run(&["fluctuations", "--out", "/nonexistent-dir/x.csv", "--n", "8", "--trials", "10"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quick_verification_passes() {
    let out = run(&["verify", "--quick"], &[]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert_eq!(text.lines().count(), 12);
    assert_eq!(text.lines().filter(|l| l.starts_with("SKIP")).count(), 4);
}
