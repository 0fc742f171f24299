use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use anyhow::{bail, Context, Result};
use sss_saliency::fixation::{
    cross_validate, default_blur_sigma, fixation_map, load_fixations, load_manifest,
    slice_fixations, Aggregation, CvOptions, FixationRecord, Strictness, TimeSliceSpec,
};
use sss_saliency::io::read_pfm;
use sss_saliency::{SaliencyMap, ScaleSelection};

use crate::cli::EvalArgs;
use crate::common::{parse_floats, usage, warn};

pub fn run(args: &EvalArgs) -> Result<()> {
    let common = &args.common;
    if !args.manifest.is_file() {
        return usage(format!("manifest {} not found", args.manifest.display()));
    }
    if !args.fixations.is_file() {
        return usage(format!(
            "fixation file {} not found",
            args.fixations.display()
        ));
    }
    if !args.maps.is_dir() {
        return usage(format!("maps directory {} not found", args.maps.display()));
    }
    let edges = parse_floats(&args.edges, "slice edge")?;
    let slices = match TimeSliceSpec::new(edges, args.discard) {
        Ok(s) => s,
        Err(e) => return usage(format!("bad slices: {e}")),
    };
    if let Some(b) = args.blur_sigma {
        if !(b >= 0.0) {
            return usage("--blur-sigma must be nonnegative");
        }
    }
    let selection = common.scale_selection()?;

    let manifest = load_manifest(File::open(&args.manifest)?)
        .with_context(|| format!("reading {}", args.manifest.display()))?;
    let strictness = if common.strict {
        Strictness::Strict
    } else {
        Strictness::Lenient
    };
    let report = load_fixations(File::open(&args.fixations)?, &manifest, strictness)
        .with_context(|| format!("reading {}", args.fixations.display()))?;
    for issue in &report.skipped {
        warn(format_args!(
            "{}:{}: {}",
            args.fixations.display(),
            issue.line,
            issue.message
        ));
    }

    let mut by_image: BTreeMap<String, Vec<FixationRecord>> = BTreeMap::new();
    for r in report.records {
        by_image.entry(r.image_id.clone()).or_default().push(r);
    }
    if by_image.is_empty() {
        bail!("no usable fixations");
    }

    let available = scan_maps(&args.maps)?;
    let scales: Vec<usize> = match selection {
        ScaleSelection::Indices(ks) => ks,
        _ => {
            let mut common_ks: Option<BTreeSet<usize>> = None;
            for id in by_image.keys() {
                let ks = available.get(id).cloned().unwrap_or_default();
                common_ks = Some(match common_ks {
                    None => ks,
                    Some(prev) => prev.intersection(&ks).copied().collect(),
                });
            }
            common_ks.unwrap_or_default().into_iter().collect()
        }
    };
    if scales.len() < 2 {
        bail!("need maps for at least two shared scales, found {scales:?}");
    }

    let mut maps = BTreeMap::new();
    let mut fixations = BTreeMap::new();
    for (id, records) in &by_image {
        let (w, h) = manifest
            .size(id)
            .expect("records are validated against the manifest");
        let mut seq = Vec::with_capacity(scales.len());
        for &k in &scales {
            let path = args.maps.join(format!("{id}_k{k}.pfm"));
            if !path.is_file() {
                bail!("missing saliency map {}", path.display());
            }
            let values = read_pfm(&path)?.map(|v| v.clamp(0.0, 1.0));
            if values.shape() != (h, w) {
                bail!(
                    "{} is {}x{}, manifest says {w}x{h}",
                    path.display(),
                    values.width(),
                    values.height()
                );
            }
            seq.push(SaliencyMap::from_normalized(values, k)?);
        }
        maps.insert(id.clone(), seq);

        let blur = args.blur_sigma.unwrap_or_else(|| default_blur_sigma(w, h));
        let per_slice = slice_fixations(records, &slices)
            .iter()
            .enumerate()
            .map(|(i, recs)| fixation_map(recs, w, h, blur, i + 1))
            .collect::<sss_saliency::Result<Vec<_>>>()?;
        fixations.insert(id.clone(), per_slice);
    }

    let opts = CvOptions {
        positive_quantile: args.quantile,
        seed: common.seed,
        aggregation: if args.pooled {
            Aggregation::Pooled
        } else {
            Aggregation::PerImage
        },
    };
    let matrix = cross_validate(&maps, &fixations, &opts)?;

    common.prepare_out()?;
    let out = &common.out;
    for (si, k) in matrix.scales.iter().enumerate() {
        for (ti, s) in matrix.slices.iter().enumerate() {
            if let Some(curve) = &matrix.pooled[si][ti] {
                let path = out.join(format!("roc_k{k}_s{s}.csv"));
                curve.write_csv(BufWriter::new(File::create(&path)?))?;
            }
        }
    }
    let path = out.join("auc_matrix.csv");
    matrix.write_csv(BufWriter::new(File::create(&path)?))?;
    eprintln!(
        "{} images, {} scales, {} slices -> {}",
        maps.len(),
        matrix.scales.len(),
        matrix.slices.len(),
        path.display()
    );
    Ok(())
}

/// Scale indices present per image id, from `<id>_k<k>.pfm` names.
fn scan_maps(dir: &Path) -> Result<BTreeMap<String, BTreeSet<usize>>> {
    let mut found: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for entry in fs::read_dir(dir)? {
        let name = entry?.file_name();
        let Some(name) = name.to_str() else { continue };
        let Some(base) = name.strip_suffix(".pfm") else {
            continue;
        };
        let Some((id, k)) = base.rsplit_once("_k") else {
            continue;
        };
        if let Ok(k) = k.parse::<usize>() {
            found.entry(id.to_string()).or_default().insert(k);
        }
    }
    Ok(found)
}
