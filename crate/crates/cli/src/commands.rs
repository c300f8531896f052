use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use tkrylov::completion::Mask;
use tkrylov::io::{load_gray, load_image, save_image};
use tkrylov::{
    apply_mask, complete as run_completion, generate_mask, psnr, relative_error, synthetic_case, Algorithm,
    CompletionConfig, Error, Result, RunReport, SyntheticCase, Tensor3,
};

use crate::{init, pattern, BenchArgs, CompleteArgs, CompressArgs};

/// What actually lands in an 8-bit image file.
fn quantize(x: &Tensor3) -> Tensor3 {
    x.map(|v| v.clamp(0.0, 255.0).round())
}

fn emit(json: String, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn report(algo: Algorithm, args: &crate::SketchArgs, reference: &Tensor3, result: &Tensor3) -> Result<RunReport> {
    Ok(RunReport {
        algorithm: algo.name().to_string(),
        rank: args.rank,
        oversample: args.oversample,
        power: args.power,
        seed: args.seed,
        relative_error: relative_error(reference, result)?,
        psnr_db: Some(psnr(reference, result)?),
        runtime_ms: 0,
        extra: BTreeMap::new(),
    })
}

pub fn compress(args: &CompressArgs) -> Result<()> {
    let img = load_image(&args.input)?;
    let algo = Algorithm::from(args.algo);
    let start = Instant::now();
    let approx = algo.run(&img, &args.sketch.params())?;
    let recovered = quantize(&approx.factors.reconstruct()?);
    let runtime_ms = start.elapsed().as_millis() as u64;
    save_image(&recovered, &args.output)?;

    let mut rep = report(algo, &args.sketch, &img, &recovered)?;
    rep.runtime_ms = runtime_ms;
    rep.extra.insert("basis_width".into(), approx.basis_width.to_string());
    if let Some(cap) = approx.basis_cap {
        rep.extra.insert("basis_requested".into(), cap.requested.to_string());
    }
    let (h, w, c) = img.shape();
    rep.extra.insert("shape".into(), format!("{h}x{w}x{c}"));
    emit(rep.to_json(), args.report.as_deref())
}

#[derive(Serialize)]
struct CompletionReport {
    /// Recovered image against the input.
    recovered: RunReport,
    /// Masked input against the input.
    observed: RunReport,
    /// One record per iteration; `relative_error` is the observed-entry
    /// residual.
    trace: Vec<RunReport>,
}

fn observed_path(args: &CompleteArgs) -> PathBuf {
    if let Some(p) = &args.observed {
        return p.clone();
    }
    let stem = args.output.file_stem().and_then(|s| s.to_str()).unwrap_or("output");
    let name = match args.output.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_observed.{ext}"),
        None => format!("{stem}_observed"),
    };
    args.output.with_file_name(name)
}

pub fn complete(args: &CompleteArgs) -> Result<()> {
    let img = load_image(&args.input)?;
    let (n1, n2, n3) = img.shape();
    let mask = match &args.mask_file {
        Some(path) => Mask::from_gray_image(&load_gray(path)?, n3)?,
        None => generate_mask(n1, n2, n3, pattern(args.mask_pattern), args.mask_ratio, args.sketch.seed)?,
    };
    let observed = apply_mask(&img, &mask)?;
    let algo = Algorithm::from(args.algo);
    let mut cfg = CompletionConfig::new(args.sketch.params(), args.iters, algo);
    cfg.init = init(args.init);

    let start = Instant::now();
    let out = run_completion(&observed, &mask, &cfg)?;
    let recovered = quantize(&out.recovered);
    let runtime_ms = start.elapsed().as_millis() as u64;
    save_image(&recovered, &args.output)?;
    save_image(&observed, observed_path(args))?;

    let mut rec = report(algo, &args.sketch, &img, &recovered)?;
    rec.runtime_ms = runtime_ms;
    rec.extra.insert("iterations".into(), args.iters.to_string());
    rec.extra.insert("observed_pixels".into(), (mask.observed_count() / n3).to_string());
    rec.extra.insert("total_pixels".into(), (n1 * n2).to_string());
    let obs = report(algo, &args.sketch, &img, &observed)?;
    emit(to_json(&CompletionReport { recovered: rec, observed: obs, trace: out.trace }), args.report.as_deref())
}

#[derive(Serialize)]
struct BenchRow {
    algorithm: &'static str,
    n: usize,
    #[serde(rename = "R")]
    rank: usize,
    #[serde(rename = "P")]
    oversample: usize,
    #[serde(rename = "q")]
    power: usize,
    seed: u64,
    relative_error: f64,
    runtime_ms: f64,
}

fn sweep(values: &[usize], default: usize) -> Vec<usize> {
    if values.is_empty() {
        vec![default]
    } else {
        values.to_vec()
    }
}

pub fn bench(args: &BenchArgs) -> Result<()> {
    let case = SyntheticCase::from_number(args.case)?;
    if args.seeds == 0 {
        return Err(Error::Config("--seeds must be at least 1".into()));
    }
    let sizes = sweep(&args.sizes, args.n);
    let ranks = sweep(&args.ranks, args.rank);
    let powers = sweep(&args.powers, args.power);
    for &n in &sizes {
        for &r in &ranks {
            if r == 0 || r + args.oversample > n {
                return Err(Error::Config(format!("R = {r}, P = {} does not fit n = {n}", args.oversample)));
            }
        }
    }

    let sink: Box<dyn Write> = match &args.csv {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    for &n in &sizes {
        let x = synthetic_case(n, case, args.data_seed)?;
        for &rank in &ranks {
            for &power in &powers {
                for seed in args.seed..args.seed + args.seeds {
                    let params = tkrylov::SketchParams::new(rank, args.oversample, power, seed);
                    for algo in [Algorithm::Power, Algorithm::BlockKrylov] {
                        let start = Instant::now();
                        let approx = algo.run(&x, &params)?;
                        let estimate = approx.factors.reconstruct()?;
                        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
                        writer
                            .serialize(BenchRow {
                                algorithm: algo.name(),
                                n,
                                rank,
                                oversample: args.oversample,
                                power,
                                seed,
                                relative_error: relative_error(&x, &estimate)?,
                                runtime_ms,
                            })
                            .map_err(std::io::Error::from)?;
                    }
                }
            }
        }
    }
    writer.flush()?;
    Ok(())
}
