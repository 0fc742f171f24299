use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use sss_saliency::io::{write_heatmap_png, write_pfm};
use sss_saliency::{ChannelMode, Field, ScaleSelection};

use crate::cli::{ChannelArg, Common};

/// Bad flags or missing required inputs; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

pub fn warn(msg: impl fmt::Display) {
    eprintln!("warning: {msg}");
}

impl From<ChannelArg> for ChannelMode {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Gray => ChannelMode::Gray,
            ChannelArg::Opponent => ChannelMode::Opponent,
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|p| p.trim())
        .filter(|p| !p.is_empty())
        .map(|p| match p.parse::<T>() {
            Ok(v) => Ok(v),
            Err(_) => usage(format!("bad {what} `{p}`")),
        })
        .collect()
}

pub fn parse_usizes(s: &str, what: &str) -> Result<Vec<usize>> {
    parse_list(s, what)
}

pub fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>> {
    parse_list(s, what)
}

impl Common {
    pub fn scale_selection(&self) -> Result<ScaleSelection> {
        if self.scales.trim().eq_ignore_ascii_case("all") {
            return Ok(ScaleSelection::All);
        }
        let ks = parse_usizes(&self.scales, "scale index")?;
        if ks.is_empty() {
            return usage("--scales is empty");
        }
        Ok(ScaleSelection::Indices(ks))
    }

    pub fn resize(&self) -> Result<Option<(u32, u32)>> {
        let Some(spec) = &self.resize else {
            return Ok(None);
        };
        let parsed = spec
            .split_once(['x', 'X'])
            .and_then(|(w, h)| Some((w.trim().parse().ok()?, h.trim().parse().ok()?)));
        match parsed {
            Some((w, h)) if w >= 2 && h >= 2 => Ok(Some((w, h))),
            _ => usage(format!("--resize expects WIDTHxHEIGHT, got `{spec}`")),
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.t0 > 0.0) {
            return usage("--t0 must be positive");
        }
        if let Some(s) = self.post_sigma {
            if !(s >= 0.0) {
                return usage("--post-sigma must be nonnegative");
            }
        }
        Ok(())
    }

    pub fn prepare_out(&self) -> Result<()> {
        fs::create_dir_all(&self.out)
            .with_context(|| format!("cannot create output directory {}", self.out.display()))
    }

    /// Run `f` over `items` on up to `--jobs` threads, keeping input order.
    pub fn run_parallel<T: Sync, R: Send>(
        &self,
        items: &[T],
        f: impl Fn(&T) -> R + Sync + Send,
    ) -> Result<Vec<R>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()?;
        Ok(pool.install(|| items.par_iter().map(&f).collect()))
    }
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "pgm"))
        .unwrap_or(false)
}

/// Expand directories into their PNG/PGM files (sorted); files pass through.
pub fn collect_images(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("cannot list {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && is_image(p))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string())
}

/// `<dir>/<name>.pfm` and `<dir>/<name>.png`.
pub fn write_map_pair(dir: &Path, name: &str, values: &Field) -> Result<()> {
    let pfm = dir.join(format!("{name}.pfm"));
    write_pfm(&pfm, values).with_context(|| format!("writing {}", pfm.display()))?;
    let png = dir.join(format!("{name}.png"));
    write_heatmap_png(&png, values).with_context(|| format!("writing {}", png.display()))?;
    Ok(())
}

/// Report per-item failures; in strict mode any failure is fatal.
pub fn finish(results: Vec<(PathBuf, Result<usize>)>, strict: bool, what: &str) -> Result<()> {
    let mut failed = 0;
    let mut written = 0;
    for (path, r) in results {
        match r {
            Ok(n) => written += n,
            Err(e) => {
                failed += 1;
                eprintln!("error: {}: {e:#}", path.display());
            }
        }
    }
    eprintln!("{written} {what} written");
    if failed > 0 && strict {
        anyhow::bail!("{failed} input(s) failed");
    }
    Ok(())
}
