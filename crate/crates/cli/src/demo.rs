use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{Context, Result};
use sss_saliency::signals::{
    removed_components, sharpness_curve, suppress_and_reconstruct_1d, synthesize_composite,
    CompositeSpec, DEFAULT_POST_SIGMA_FRACTION_1D,
};

use crate::cli::{DemoArgs, DemoPart};
use crate::common::{parse_usizes, usage};

pub fn run(args: &DemoArgs) -> Result<()> {
    let cycles = parse_usizes(&args.cycles, "cycle count")?;
    if cycles.is_empty() {
        return usage("--cycles is empty");
    }
    if args.samples < 16 {
        return usage("--samples must be at least 16");
    }
    args.common.prepare_out()?;
    let out = &args.common.out;
    if args.only != Some(DemoPart::Fig8) {
        sharpness_table(args, &cycles, out)?;
    }
    if args.only != Some(DemoPart::Fig7) {
        suppression_trace(args, out)?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(csv::Writer::from_writer(BufWriter::new(f)))
}

fn sharpness_table(args: &DemoArgs, cycles: &[usize], out: &Path) -> Result<()> {
    let curve = sharpness_curve(args.f_bg, cycles, args.h_sigma)?;
    let path = out.join("fig7_sharpness.csv");
    let mut w = create(&path)?;
    w.write_record(["N", "sharpness"])?;
    for (n, p) in curve {
        w.write_record([n.to_string(), p.to_string()])?;
    }
    w.flush()?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn suppression_trace(args: &DemoArgs, out: &Path) -> Result<()> {
    let spec = CompositeSpec::deviant_segment();
    let sig = synthesize_composite(&spec, args.samples)?;
    let post_sigma = args
        .common
        .post_sigma
        .unwrap_or(DEFAULT_POST_SIGMA_FRACTION_1D * args.samples as f64);
    let s =
        suppress_and_reconstruct_1d(&sig, args.sigma, !args.common.linear_amplitude, post_sigma)?;
    let removed = removed_components(&sig, &s.reconstruction)?;
    let path = out.join("fig8_trace.csv");
    let mut w = create(&path)?;
    w.write_record(["t", "original", "reconstruction", "saliency", "removed"])?;
    for i in 0..sig.len() {
        w.write_record([
            sig.time(i).to_string(),
            sig.samples()[i].to_string(),
            s.reconstruction.samples()[i].to_string(),
            s.saliency.samples()[i].to_string(),
            removed.spatial.samples()[i].to_string(),
        ])?;
    }
    w.flush()?;
    eprintln!("wrote {}", path.display());
    Ok(())
}
