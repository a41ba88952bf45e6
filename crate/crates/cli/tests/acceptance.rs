//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use gsp_core::filter::polynomial_matrix;
use gsp_core::generators::{random_connected, random_points, random_sparse, random_tree};
use gsp_core::sampling::{sampled_sigma_min, SamplingSet};
use gsp_core::*;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: gsp_core::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_signal(rng: &mut ChaCha8Rng, n: usize) -> GraphSignal {
    GraphSignal::from_real(&(0..n).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<_>>()).unwrap()
}

fn within(elapsed: Duration, limit: f64) -> std::result::Result<(), String> {
    ensure!(elapsed.as_secs_f64() < limit, "took {:.2}s, limit {limit}s", elapsed.as_secs_f64());
    Ok(())
}

fn dft_correspondence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for n in [4usize, 8, 16] {
        let op = ok(ShiftOperator::new(&ok(Graph::cycle(n, true))?, ShiftKind::Adjacency))?;
        let basis = ok(eigendecompose(&op))?;
        let roots: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64)).collect();
        // each eigenvalue is paired with the DFT bin of the nearest root
        let mut bins = Vec::with_capacity(n);
        for lambda in basis.eigenvalues() {
            let (k, dist) = roots
                .iter()
                .enumerate()
                .map(|(k, r)| (k, (r - lambda).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            ensure!(dist <= 1e-9, "C{n}: eigenvalue {lambda} is {dist:e} from the nearest root");
            bins.push(k);
        }
        let mut sorted = bins.clone();
        sorted.sort_unstable();
        sorted.dedup();
        ensure!(sorted.len() == n, "C{n}: eigenvalues do not cover every root once");
        for _ in 0..50 {
            let s = random_signal(&mut rng, n);
            let shat = ok(gft(&basis, &s))?;
            for (m, &k) in bins.iter().enumerate() {
                let dft: Complex64 = s
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(t, x)| x * Complex64::from_polar(1.0, -2.0 * PI * (k * t) as f64 / n as f64))
                    .sum::<Complex64>()
                    / (n as f64).sqrt();
                worst = worst.max((shat.values()[m].norm() - dft.norm()).abs());
            }
        }
    }
    ensure!(worst <= 1e-9, "magnitude mismatch {worst:e}");
    within(start.elapsed(), 1.0)?;
    Ok(format!("max magnitude error {worst:.1e}"))
}

fn parseval_roundtrip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut energy, mut round): (f64, f64) = (0.0, 0.0);
    for trial in 0..50u64 {
        let n = rng.random_range(2..=64);
        let g = random_connected(n, rng.random_range(0.0..0.3), (0.1, 1.0), trial);
        let kind = [ShiftKind::Adjacency, ShiftKind::CombinatorialLaplacian, ShiftKind::NormalizedLaplacian][trial as usize % 3];
        let basis = ok(eigendecompose(&ok(ShiftOperator::new(&g, kind))?))?;
        let s = random_signal(&mut rng, n);
        let shat = ok(gft(&basis, &s))?;
        energy = energy.max((shat.norm2() - s.norm2()).abs());
        round = round.max(ok(igft(&basis, &shat))?.max_abs_diff(&s));
    }
    ensure!(energy <= 1e-10 && round <= 1e-10, "norm gap {energy:e}, roundtrip {round:e}");
    within(start.elapsed(), 5.0)?;
    Ok(format!("norm gap {energy:.1e}, roundtrip {round:.1e}"))
}

fn filtering_theorem() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for trial in 0..100u64 {
        let n = rng.random_range(2..=64);
        let g = random_connected(n, rng.random_range(0.0..0.3), (0.1, 1.0), 1000 + trial);
        let kind = [ShiftKind::Adjacency, ShiftKind::CombinatorialLaplacian, ShiftKind::NormalizedLaplacian][trial as usize % 3];
        let op = ok(ShiftOperator::new(&g, kind))?;
        let basis = ok(eigendecompose(&op))?;
        let len = rng.random_range(1..=9usize).min(n);
        let coeffs: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s = random_signal(&mut rng, n);
        let vertex = ok(apply_polynomial(&op, &coeffs, &s))?;
        let spectral = ok(apply_exact(&basis, &ok(FilterKernel::polynomial(coeffs))?, &s))?;
        worst = worst.max(vertex.relative_error(&spectral));
    }
    ensure!(worst <= 1e-8, "relative error {worst:e}");
    within(start.elapsed(), 10.0)?;
    Ok(format!("max relative error {worst:.1e}"))
}

fn eigenresponse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for trial in 0..20u64 {
        let n = rng.random_range(3..=40);
        let g = random_connected(n, 0.15, (0.1, 1.0), 2000 + trial);
        let kind = [ShiftKind::Adjacency, ShiftKind::CombinatorialLaplacian, ShiftKind::NormalizedLaplacian][trial as usize % 3];
        let op = ok(ShiftOperator::new(&g, kind))?;
        let basis = ok(eigendecompose(&op))?;
        let coeffs: Vec<f64> = (0..4.min(n)).map(|_| rng.random_range(-1.0..1.0)).collect();
        let kernel = ok(FilterKernel::polynomial(coeffs.clone()))?;
        let h = polynomial_matrix(&op, &coeffs).map_err(|e| e.to_string())?.map(|x| Complex64::new(x, 0.0));
        for m in 0..n {
            let v: DVector<Complex64> = basis.vectors().column(m).into_owned();
            let expected = &v * ok(kernel.evaluate(basis.eigenvalues()[m]))?;
            worst = worst.max((&h * &v - expected).camax());
        }
    }
    ensure!(worst <= 1e-9, "eigenresponse error {worst:e}");
    Ok(format!("max deviation {worst:.1e}"))
}

fn tv_identity_and_ordering() -> Outcome {
    let mut ops = vec![ok(ShiftOperator::new(&ok(Graph::cycle(8, true))?, ShiftKind::Adjacency))?];
    for seed in 0..10u64 {
        let g = random_connected(10 + 3 * seed as usize, 0.2, (0.1, 1.0), 3000 + seed);
        ops.push(ok(ShiftOperator::new(&g, ShiftKind::Adjacency))?);
    }
    let mut worst: f64 = 0.0;
    for op in &ops {
        let basis = ok(eigendecompose(op))?;
        let lmax = basis.spectral_radius();
        for k in 0..basis.dim() {
            let v = basis.component(k);
            let tv = ok(total_variation(op, &v))?;
            let expected = (Complex64::new(1.0, 0.0) - basis.eigenvalues()[k] / lmax).norm() * v.norm1();
            worst = worst.max((tv - expected).abs());
        }
    }
    ensure!(worst <= 1e-9, "TV identity error {worst:e}");
    let c8 = ok(eigendecompose(&ops[0]))?;
    let first = c8.ordered_eigenvalues()[0];
    ensure!((first - Complex64::new(1.0, 0.0)).norm() <= 1e-9, "C8 ordering starts at {first}");
    let last = *c8.ordered_eigenvalues().last().unwrap();
    ensure!((last + Complex64::new(1.0, 0.0)).norm() <= 1e-9, "C8 ordering ends at {last}");
    Ok(format!("max TV error {worst:.1e}, C8 ordering starts at 1"))
}

fn chebyshev_accuracy_and_scale() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for seed in 0..3u64 {
        let g = random_sparse(500, 3, 4000 + seed);
        let op = ok(ShiftOperator::new(&g, ShiftKind::CombinatorialLaplacian))?;
        let basis = ok(eigendecompose(&op))?;
        let lmax = basis.eigenvalues().iter().map(|l| l.re).fold(0.0, f64::max);
        let kernel = ok(FilterKernel::heat(5.0 / lmax))?;
        let cheb = ok(ChebyshevFilter::fit(&kernel, 30, spectral_upper_bound(&op, seed)))?;
        let s = random_signal(&mut rng, 500);
        let exact = ok(apply_exact(&basis, &kernel, &s))?;
        worst = worst.max(ok(cheb.apply(&op, &s))?.relative_error(&exact));
    }
    ensure!(worst <= 1e-4, "N=500 relative error {worst:e}");

    let g = random_sparse(100_000, 3, 4100);
    let avg_degree = g.edges().len() as f64 / g.node_count() as f64;
    let op = ok(ShiftOperator::new(&g, ShiftKind::CombinatorialLaplacian))?;
    ensure!(
        matches!(eigendecompose(&op), Err(GspError::TooLarge { .. })),
        "eigendecompose should refuse N=100000"
    );
    let s = random_signal(&mut rng, 100_000);
    let start = Instant::now();
    let ub = spectral_upper_bound(&op, 0);
    let cheb = ok(ChebyshevFilter::fit(&ok(FilterKernel::heat(5.0 / ub))?, 30, ub))?;
    let out = ok(cheb.apply(&op, &s))?;
    let elapsed = start.elapsed();
    ensure!(out.values().iter().all(|x| x.re.is_finite()), "non-finite output at N=100000");
    within(elapsed, 30.0)?;
    Ok(format!(
        "N=500 max relative error {worst:.1e}; N=100000 (avg degree {avg_degree:.2}) in {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn k_hop_localization() -> Outcome {
    let mut graphs = vec![ok(Graph::path(12))?, ok(Graph::path(40))?];
    graphs.extend((0..5u64).map(|seed| random_tree(40, 5000 + seed)));
    let kernel = ok(FilterKernel::heat(1.0))?;
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    for g in &graphs {
        let op = ok(ShiftOperator::new(g, ShiftKind::CombinatorialLaplacian))?;
        let ub = spectral_upper_bound(&op, 0);
        for k in 1..=6 {
            let cheb = ok(ChebyshevFilter::fit(&kernel, k, ub))?;
            for i in [0, g.node_count() / 2, g.node_count() - 1] {
                let hops = ok(g.hop_distances(i))?;
                let response = ok(impulse_response(&op, GraphFilter::Chebyshev(&cheb), i))?;
                for (node, value) in response.values().iter().enumerate() {
                    if hops[node].is_none_or(|h| h > k) {
                        worst = worst.max(value.norm());
                        checked += 1;
                    }
                }
            }
        }
    }
    ensure!(worst <= 1e-12, "leak beyond K hops {worst:e}");
    Ok(format!("{checked} far entries, max {worst:.1e}"))
}

fn brute_force_best(model: &BandlimitedModel, n: usize, k: usize) -> f64 {
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let nodes: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        best = best.max(sampled_sigma_min(model, &SamplingSet::new(nodes, n).unwrap()));
    }
    best
}

fn sampling_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for trial in 0..100u64 {
        let n = rng.random_range(5..=50);
        let k = rng.random_range(1..=5);
        let g = random_connected(n, rng.random_range(0.0..0.3), (0.1, 1.0), 6000 + trial);
        let op = ok(ShiftOperator::new(&g, ShiftKind::CombinatorialLaplacian))?;
        let model = ok(BandlimitedModel::new(&ok(eigendecompose(&op))?, k))?;
        let set = ok(greedy_select(&model, k))?;
        ensure!(uniqueness_check(&model, &set), "trial {trial}: greedy set {:?} not unique", set.nodes());
        let truth = random_bandlimited(&model, trial);
        let samples: Vec<f64> = set.nodes().iter().map(|&i| truth.values()[i].re).collect();
        worst = worst.max(ok(reconstruct(&model, &set, &samples))?.relative_error(&truth));
    }
    ensure!(worst <= 1e-8, "recovery error {worst:e}");

    let mut ratio: f64 = 0.0;
    for trial in 0..30u64 {
        let n = rng.random_range(3..=8);
        let k = rng.random_range(1..=n.min(5));
        let g = random_connected(n, 0.3, (0.1, 1.0), 7000 + trial);
        let op = ok(ShiftOperator::new(&g, ShiftKind::CombinatorialLaplacian))?;
        let model = ok(BandlimitedModel::new(&ok(eigendecompose(&op))?, k))?;
        let greedy = sampled_sigma_min(&model, &ok(greedy_select(&model, k))?);
        let best = brute_force_best(&model, n, k);
        ensure!(greedy * 10.0 >= best, "trial {trial}: greedy {greedy:e} vs optimum {best:e}");
        ratio = ratio.max(best / greedy);
    }
    Ok(format!("max recovery error {worst:.1e}; worst optimum/greedy ratio {ratio:.2}"))
}

fn outlier_pipeline() -> Outcome {
    let n = 200;
    for seed in 0..20u64 {
        let pts = random_points(n, 2, seed);
        let g = ok(Graph::knn(&pts, 8, 0.1))?;
        let op = ok(ShiftOperator::new(&g, ShiftKind::CombinatorialLaplacian))?;
        let basis = ok(eigendecompose(&op))?;
        let ordered = basis.ordered_eigenvalues();
        let cutoff = 0.5 * (ordered[20].re + ordered[21].re);
        let background: Vec<f64> = pts.iter().map(|p| (PI * p[0]).sin() + (PI * p[1]).cos()).collect();
        let mean = background.iter().sum::<f64>() / n as f64;
        let sd = (background.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        let planted = (seed as usize * 37) % n;
        let sign = if seed % 2 == 0 { 1.0 } else { -1.0 };
        let mut values = background;
        values[planted] += sign * 10.0 * sd;
        let found = ok(detect_outliers(&op, &ok(GraphSignal::from_real(&values))?, cutoff, 4.0))?;
        ensure!(found == vec![planted], "seed {seed}: planted {planted}, found {found:?}");
    }
    Ok("20/20 seeds return exactly the planted node".into())
}

fn gsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsp")).args(args).output().expect("binary runs")
}

fn cli_end_to_end() -> Outcome {
    let dir = std::env::temp_dir().join(format!("gsp-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let result = cli_fixtures(&dir);
    let _ = fs::remove_dir_all(&dir);
    result
}

fn cli_fixtures(dir: &Path) -> Outcome {
    let write = |name: &str, body: &str| -> std::result::Result<String, String> {
        let p = dir.join(name);
        fs::write(&p, body).map_err(|e| e.to_string())?;
        Ok(p.to_string_lossy().into_owned())
    };
    let p3 = write("p3.csv", "src,dst,weight\n0,1,1\n1,2,1\n")?;
    let k2 = write("k2.csv", "src,dst,weight\n0,1,1\n")?;
    let c4 = write("c4.csv", "src,dst,weight\n0,1,1\n1,2,1\n2,3,1\n3,0,1\n")?;
    let k2_signal = write("k2_signal.csv", "node,value\n0,1\n1,0\n")?;
    let c4_spike = write("c4_spike.csv", "node,value\n0,1\n1,1\n2,1\n3,5\n")?;
    let p3_samples = write("p3_samples.csv", "node,value\n0,1\n2,1\n")?;
    let missing = dir.join("absent.csv").to_string_lossy().into_owned();
    let malformed = write("bad.csv", "src,dst,weight\n0,one,1\n")?;

    let fixtures: Vec<(Vec<&str>, i32)> = vec![
        (vec!["spectrum", "--graph", &c4, "--directed", "--shift", "adjacency"], 0),
        (vec!["spectrum", "--graph", &k2, "--shift", "laplacian"], 0),
        (vec!["spectrum", "--graph", &k2, "--shift", "laplacian", "--signal", &k2_signal], 0),
        (vec!["filter", "--graph", &k2, "--shift", "laplacian", "--signal", &k2_signal, "--filter-json", r#"{"kind":"heat","t":1.0}"#], 0),
        (
            vec![
                "filter", "--graph", &k2, "--shift", "laplacian", "--signal", &k2_signal,
                "--filter-json", r#"{"kind":"heat","t":1.0}"#, "--method", "chebyshev", "--degree", "30", "--compare-exact",
            ],
            0,
        ),
        (vec!["sample", "--graph", &p3, "--shift", "laplacian", "-K", "2", "-m", "2"], 0),
        (vec!["reconstruct", "--graph", &p3, "--shift", "laplacian", "-K", "2", "--samples", &p3_samples], 0),
        (vec!["outliers", "--graph", &c4, "--shift", "laplacian", "--signal", &c4_spike, "--cutoff", "0.5", "--tau", "1.2"], 0),
        (vec!["tv", "--graph", &c4, "--directed", "--signal", &c4_spike], 0),
        (vec!["spectrum", "--graph", &missing], 2),
        (vec!["spectrum", "--graph", &malformed], 2),
        (vec!["spectrum", "--graph", &k2, "--shift", "bogus"], 2),
        (vec!["spectrum", "--graph", &c4, "--directed", "--shift", "laplacian"], 3),
        (vec!["sample", "--graph", &p3, "--shift", "laplacian", "-K", "2", "-m", "1"], 3),
        (vec!["filter", "--graph", &c4, "--directed", "--signal", &c4_spike, "--filter-json", r#"{"kind":"heat","t":1.0}"#], 3),
    ];

    let mut outputs = Vec::new();
    for (args, code) in &fixtures {
        let first = gsp(args);
        let second = gsp(args);
        ensure!(
            first.status.code() == Some(*code),
            "`gsp {}` exited {:?}, expected {code}: {}",
            args.join(" "),
            first.status.code(),
            String::from_utf8_lossy(&first.stderr)
        );
        ensure!(
            first.stdout == second.stdout && first.stderr == second.stderr && first.status == second.status,
            "`gsp {}` is not byte-stable",
            args.join(" ")
        );
        if *code != 0 {
            ensure!(!first.stderr.is_empty(), "`gsp {}` failed silently", args.join(" "));
        }
        outputs.push(String::from_utf8_lossy(&first.stdout).into_owned());
    }

    let eigen_column = |csv: &str| -> Vec<(f64, f64)> {
        csv.lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                (f[1].parse().unwrap(), f[2].parse().unwrap())
            })
            .collect()
    };
    let c4_spec = eigen_column(&outputs[0]);
    let expected = [(1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (-1.0, 0.0)];
    ensure!(
        c4_spec.len() == 4 && c4_spec.iter().zip(expected).all(|(a, b)| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9),
        "C4 spectrum {c4_spec:?}"
    );
    let k2_spec = eigen_column(&outputs[1]);
    ensure!(
        k2_spec.len() == 2 && k2_spec[0].0.abs() < 1e-12 && (k2_spec[1].0 - 2.0).abs() < 1e-12,
        "K2 spectrum {k2_spec:?}"
    );
    let heat: Vec<f64> = outputs[3].lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let e2 = (-2.0f64).exp();
    ensure!(
        heat.len() == 2 && (heat[0] - (1.0 + e2) / 2.0).abs() < 1e-12 && (heat[1] - (1.0 - e2) / 2.0).abs() < 1e-12,
        "K2 heat output {heat:?}"
    );
    let diff: f64 = outputs[4]
        .lines()
        .find_map(|l| l.strip_prefix("max_abs_difference,"))
        .and_then(|v| v.parse().ok())
        .ok_or("chebyshev comparison line missing")?;
    ensure!(diff <= 1e-4 * 1.0, "chebyshev vs exact difference {diff:e}");
    ensure!(outputs[5] == "node\n0\n2\n", "P3 sampling set {:?}", outputs[5]);
    let residual: f64 = outputs[6]
        .lines()
        .find_map(|l| l.strip_prefix("residual_norm,"))
        .and_then(|v| v.parse().ok())
        .ok_or("residual line missing")?;
    ensure!(residual < 1e-8, "reconstruction residual {residual:e}");
    ensure!(outputs[7] == "3\n", "C4 outliers {:?}", outputs[7]);
    Ok(format!("{} commands byte-stable, exit codes as expected", fixtures.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 DFT correspondence", dft_correspondence),
        ("2 Parseval and roundtrip", parseval_roundtrip),
        ("3 filtering-theorem equivalence", filtering_theorem),
        ("4 eigenresponse", eigenresponse),
        ("5 TV identity and ordering", tv_identity_and_ordering),
        ("6 Chebyshev accuracy and scalability", chebyshev_accuracy_and_scale),
        ("7 K-hop localization", k_hop_localization),
        ("8 sampling exact recovery", sampling_recovery),
        ("9 outlier pipeline", outlier_pipeline),
        ("10 CLI end-to-end", cli_end_to_end),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({secs:.2}s): {detail}"),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] {name} ({secs:.2}s): {reason}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
