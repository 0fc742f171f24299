use std::path::Path;

use anyhow::Result;
use sss_saliency::baselines::{ft_saliency, pft_saliency, sr_saliency, Baseline};
use sss_saliency::io::load_image;
use sss_saliency::scale_space::default_post_sigma;

use crate::cli::{BaselineArgs, ModelArg};
use crate::common::{collect_images, finish, stem, usage, warn, write_map_pair};

pub fn run(args: &BaselineArgs) -> Result<()> {
    let common = &args.common;
    common.check()?;
    let resize = common.resize()?;
    if args.sr_window < 3 || args.sr_window.is_multiple_of(2) {
        return usage("--sr-window must be odd and at least 3");
    }
    let models: Vec<Baseline> = match args.model {
        ModelArg::Pft => vec![Baseline::Pft],
        ModelArg::Sr => vec![Baseline::Sr],
        ModelArg::Ft => vec![Baseline::Ft],
        ModelArg::All => Baseline::ALL.to_vec(),
    };

    let images = collect_images(&args.inputs)?;
    if images.is_empty() {
        warn("no input images");
        return Ok(());
    }
    common.prepare_out()?;
    let results = common.run_parallel(&images, |path| {
        let r = process(
            path,
            &common.out,
            resize,
            &models,
            args.sr_window,
            common.post_sigma,
        );
        (path.clone(), r)
    })?;
    finish(results, common.strict, "map pairs")
}

fn process(
    path: &Path,
    out: &Path,
    resize: Option<(u32, u32)>,
    models: &[Baseline],
    sr_window: usize,
    post_sigma: Option<f64>,
) -> Result<usize> {
    let img = load_image(path, resize)?;
    let (h, w) = img.shape();
    let post_sigma = post_sigma.unwrap_or_else(|| default_post_sigma(h, w));
    let name = stem(path);
    for &model in models {
        let map = match model {
            Baseline::Pft => pft_saliency(&img.luma(), post_sigma)?,
            Baseline::Sr => sr_saliency(&img.luma(), sr_window, post_sigma)?,
            Baseline::Ft => ft_saliency(&img, 0.0)?,
        };
        write_map_pair(out, &format!("{name}_{}", model.name()), map.values())?;
    }
    Ok(models.len())
}
