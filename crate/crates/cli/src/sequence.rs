use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sss_saliency::io::load_image;
use sss_saliency::scale_space::default_post_sigma;
use sss_saliency::spectral::scale_sigma;
use sss_saliency::{saliency_sequence, ScaleSelection, SequenceOptions};

use crate::cli::SequenceArgs;
use crate::common::{collect_images, finish, parse_floats, stem, usage, warn, write_map_pair};

/// Written next to the maps of each image.
#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    source: String,
    width: usize,
    height: usize,
    scale_count: usize,
    t0: f64,
    log_amplitude: bool,
    channel_mode: &'a str,
    post_sigma: f64,
    scales: Vec<SidecarScale>,
}

#[derive(Debug, Serialize)]
struct SidecarScale {
    k: usize,
    sigma: f64,
    raw_max: f64,
}

pub fn run(args: &SequenceArgs) -> Result<()> {
    let common = &args.common;
    common.check()?;
    let resize = common.resize()?;
    let scales = match &args.sigmas {
        Some(s) => {
            let sigmas = parse_floats(s, "kernel width")?;
            if sigmas.is_empty() || sigmas.iter().any(|v| !(*v >= 0.0)) {
                return usage("--sigmas needs nonnegative widths");
            }
            ScaleSelection::Sigmas(sigmas)
        }
        None => common.scale_selection()?,
    };
    let opts = SequenceOptions {
        t0: common.t0,
        post_sigma: common.post_sigma,
        use_log: !common.linear_amplitude,
        channel_mode: common.channel_mode.into(),
        scales,
    };

    let images = collect_images(&args.inputs)?;
    if images.is_empty() {
        warn("no input images");
        return Ok(());
    }
    common.prepare_out()?;
    let results = common.run_parallel(&images, |path| {
        (path.clone(), process(path, &common.out, resize, &opts))
    })?;
    finish(results, common.strict, "map pairs")
}

fn process(
    path: &Path,
    out: &Path,
    resize: Option<(u32, u32)>,
    opts: &SequenceOptions,
) -> Result<usize> {
    let img = load_image(path, resize)?;
    let seq = saliency_sequence(&img, opts)?;
    let (h, w) = img.shape();
    let name = stem(path);
    let mut scales = Vec::with_capacity(seq.len());
    for map in seq.maps() {
        let k = map.scale_index();
        write_map_pair(out, &format!("{name}_k{k}"), map.values())?;
        scales.push(SidecarScale {
            k,
            sigma: match &opts.scales {
                ScaleSelection::Sigmas(s) => s[k - 1],
                _ => scale_sigma(k, opts.t0),
            },
            raw_max: map.raw_max(),
        });
    }
    let sidecar = Sidecar {
        source: path.display().to_string(),
        width: w,
        height: h,
        scale_count: seq.scale_count(),
        t0: opts.t0,
        log_amplitude: opts.use_log,
        channel_mode: match opts.channel_mode {
            sss_saliency::ChannelMode::Gray => "gray",
            sss_saliency::ChannelMode::Opponent => "opponent",
        },
        post_sigma: opts.post_sigma.unwrap_or_else(|| default_post_sigma(h, w)),
        scales,
    };
    let json = out.join(format!("{name}.json"));
    fs::write(&json, serde_json::to_string_pretty(&sidecar)? + "\n")
        .with_context(|| format!("writing {}", json.display()))?;
    Ok(seq.len())
}
