//! Fixation data, time-sliced fixation maps and ROC-based evaluation of
//! saliency maps against them.
//!
//! Early fixations tend to land on large salient regions and later ones on
//! finer detail, so each time slice gets its own fixation map and every
//! (scale, slice) pair gets its own AUC.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{param, Error, Result};
use crate::field::Field;
use crate::filter::gaussian_blur;
use crate::scale_space::SaliencyMap;

/// Leading interval dropped from every recording.
pub const DEFAULT_DISCARD_MS: f64 = 100.0;
/// Fraction of pixels treated as fixated.
pub const DEFAULT_POSITIVE_QUANTILE: f64 = 0.05;
/// Fixation-map blur as a fraction of the shorter image side.
pub const DEFAULT_BLUR_FRACTION: f64 = 0.02;

pub fn default_blur_sigma(width: usize, height: usize) -> f64 {
    DEFAULT_BLUR_FRACTION * width.min(height) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixationRecord {
    pub subject_id: String,
    pub image_id: String,
    /// Milliseconds since stimulus onset.
    pub t_ms: f64,
    pub x: usize,
    pub y: usize,
}

/// Stimulus sizes keyed by image id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    sizes: BTreeMap<String, (usize, usize)>,
}

impl Manifest {
    pub fn insert(&mut self, image_id: impl Into<String>, width: usize, height: usize) {
        self.sizes.insert(image_id.into(), (width, height));
    }

    /// `(width, height)`.
    pub fn size(&self, image_id: &str) -> Option<(usize, usize)> {
        self.sizes.get(image_id).copied()
    }

    pub fn image_ids(&self) -> impl Iterator<Item = &str> {
        self.sizes.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }
}

#[derive(Debug, Deserialize)]
struct ManifestRow {
    image_id: String,
    width: usize,
    height: usize,
}

/// Read an `image_id,width,height` manifest.
pub fn load_manifest<R: Read>(source: R) -> Result<Manifest> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut manifest = Manifest::default();
    for row in reader.deserialize::<ManifestRow>() {
        let row = row?;
        if row.width == 0 || row.height == 0 {
            return param(format!("image `{}` has an empty size", row.image_id));
        }
        manifest.insert(row.image_id, row.width, row.height);
    }
    Ok(manifest)
}

/// Whether malformed fixation rows abort the load or are skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    Strict,
    #[default]
    Lenient,
}

/// A rejected row: 1-based line number in the file (the header is line 1).
#[derive(Debug, Clone, PartialEq)]
pub struct RowIssue {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LoadReport {
    pub records: Vec<FixationRecord>,
    pub skipped: Vec<RowIssue>,
}

#[derive(Debug, Deserialize)]
struct FixationRow {
    subject_id: String,
    image_id: String,
    t_ms: f64,
    x: i64,
    y: i64,
}

fn validate_row(
    row: FixationRow,
    manifest: &Manifest,
) -> std::result::Result<FixationRecord, String> {
    let (w, h) = manifest
        .size(&row.image_id)
        .ok_or_else(|| format!("unknown image_id `{}`", row.image_id))?;
    if !(row.t_ms >= 0.0) || !row.t_ms.is_finite() {
        return Err(format!("invalid time {}", row.t_ms));
    }
    if row.x < 0 || row.x as usize >= w || row.y < 0 || row.y as usize >= h {
        return Err(format!(
            "({}, {}) outside the {w}x{h} bounds of `{}`",
            row.x, row.y, row.image_id
        ));
    }
    Ok(FixationRecord {
        subject_id: row.subject_id,
        image_id: row.image_id,
        t_ms: row.t_ms,
        x: row.x as usize,
        y: row.y as usize,
    })
}

/// Parse a `subject_id,image_id,t_ms,x,y` CSV stream.
pub fn load_fixations<R: Read>(
    source: R,
    manifest: &Manifest,
    strictness: Strictness,
) -> Result<LoadReport> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers()?.clone();
    let mut report = LoadReport::default();
    let mut record = csv::StringRecord::new();
    loop {
        let (line, outcome) = match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => (
                record.position().map_or(0, |p| p.line()),
                record
                    .deserialize::<FixationRow>(Some(&headers))
                    .map_err(|e| e.to_string())
                    .and_then(|row| validate_row(row, manifest)),
            ),
            Err(e) => (e.position().map_or(0, |p| p.line()), Err(e.to_string())),
        };
        match outcome {
            Ok(rec) => report.records.push(rec),
            Err(message) if strictness == Strictness::Strict => {
                return Err(Error::Record { line, message })
            }
            Err(message) => report.skipped.push(RowIssue { line, message }),
        }
    }
    Ok(report)
}

/// Half-open millisecond slices `[e_i, e_{i+1})` after dropping the first
/// `discard_before_ms`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSliceSpec {
    boundaries: Vec<f64>,
    discard_before_ms: f64,
}

impl TimeSliceSpec {
    pub fn new(boundaries: Vec<f64>, discard_before_ms: f64) -> Result<Self> {
        if boundaries.len() < 2 {
            return param("need at least two slice edges");
        }
        if boundaries.iter().any(|e| !e.is_finite()) {
            return param("slice edges must be finite");
        }
        if boundaries.windows(2).any(|p| !(p[0] < p[1])) {
            return param("slice edges must be strictly increasing");
        }
        if !(discard_before_ms >= 0.0) || discard_before_ms > boundaries[0] {
            return param(format!(
                "discard interval {discard_before_ms} ms must be within [0, {}]",
                boundaries[0]
            ));
        }
        Ok(Self {
            boundaries,
            discard_before_ms,
        })
    }

    /// Edges with the default 100 ms discard.
    pub fn with_default_discard(boundaries: Vec<f64>) -> Result<Self> {
        Self::new(boundaries, DEFAULT_DISCARD_MS)
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn discard_before_ms(&self) -> f64 {
        self.discard_before_ms
    }

    pub fn slice_count(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// Slice containing `t_ms`, if any.
    pub fn slice_of(&self, t_ms: f64) -> Option<usize> {
        if t_ms < self.discard_before_ms {
            return None;
        }
        // Index of the last edge <= t.
        let i = self.boundaries.partition_point(|&e| e <= t_ms);
        (i >= 1 && i < self.boundaries.len()).then(|| i - 1)
    }
}

/// Assign each record to its slice; discarded and out-of-range records are
/// dropped.
pub fn slice_fixations(
    records: &[FixationRecord],
    spec: &TimeSliceSpec,
) -> Vec<Vec<FixationRecord>> {
    let mut slices = vec![Vec::new(); spec.slice_count()];
    for r in records {
        if let Some(i) = spec.slice_of(r.t_ms) {
            slices[i].push(r.clone());
        }
    }
    slices
}

/// Normalized fixation density of one time slice.
#[derive(Debug, Clone, PartialEq)]
pub struct FixationMap {
    values: Field,
    slice_index: usize,
    n_records: usize,
}

impl FixationMap {
    pub fn values(&self) -> &Field {
        &self.values
    }

    pub fn slice_index(&self) -> usize {
        self.slice_index
    }

    pub fn n_records(&self) -> usize {
        self.n_records
    }

    pub fn is_empty(&self) -> bool {
        self.n_records == 0
    }

    /// Row-major indices of pixels in the top `q` fraction of the density.
    /// Zero-density pixels are never included.
    pub fn top_quantile_pixels(&self, q: f64) -> Vec<usize> {
        let vals = self.values.as_slice();
        let mut sorted: Vec<f64> = vals.iter().copied().filter(|&v| v > 0.0).collect();
        if sorted.is_empty() {
            return Vec::new();
        }
        sorted.sort_by(|a, b| b.total_cmp(a));
        let want = ((q * vals.len() as f64).ceil() as usize).clamp(1, sorted.len());
        let cut = sorted[want - 1];
        vals.iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0 && v >= cut)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Unit mass per record, Gaussian blur (reflective borders), unit-sum
/// normalization.
pub fn fixation_map(
    records: &[FixationRecord],
    width: usize,
    height: usize,
    blur_sigma: f64,
    slice_index: usize,
) -> Result<FixationMap> {
    let points: Vec<(usize, usize)> = records.iter().map(|r| (r.x, r.y)).collect();
    fixation_map_from_points(&points, width, height, blur_sigma, slice_index)
}

/// [`fixation_map`] for bare `(x, y)` pixel coordinates.
pub fn fixation_map_from_points(
    points: &[(usize, usize)],
    width: usize,
    height: usize,
    blur_sigma: f64,
    slice_index: usize,
) -> Result<FixationMap> {
    if !(blur_sigma >= 0.0) {
        return param(format!("blur sigma must be nonnegative, got {blur_sigma}"));
    }
    if width == 0 || height == 0 {
        return Err(Error::Shape(format!("empty fixation map {width}x{height}")));
    }
    let mut acc = Field::zeros(height, width);
    for &(x, y) in points {
        if x >= width || y >= height {
            return param(format!("fixation ({x}, {y}) outside {width}x{height}"));
        }
        acc.set(y, x, acc.get(y, x) + 1.0);
    }
    if points.is_empty() {
        return Ok(FixationMap {
            values: acc,
            slice_index,
            n_records: 0,
        });
    }
    let blurred = gaussian_blur(&acc, blur_sigma);
    let total = blurred.sum();
    Ok(FixationMap {
        values: blurred.map(|v| v / total),
        slice_index,
        n_records: points.len(),
    })
}

/// One point of an ROC sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    /// Scores at or above this value are called positive.
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    points: Vec<RocPoint>,
    auc: f64,
}

impl RocCurve {
    pub fn points(&self) -> &[RocPoint] {
        &self.points
    }

    pub fn auc(&self) -> f64 {
        self.auc
    }

    /// Write `threshold,fpr,tpr` rows.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["threshold", "fpr", "tpr"])?;
        for p in &self.points {
            w.write_record([
                p.threshold.to_string(),
                p.fpr.to_string(),
                p.tpr.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Trapezoid area under a polyline of `(fpr, tpr)` points.
pub fn trapezoid_auc(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|p| (p[1].fpr - p[0].fpr) * (p[1].tpr + p[0].tpr) / 2.0)
        .sum()
}

/// Threshold sweep over the distinct scores, highest first. The curve starts
/// at `(0, 0)` (threshold `+inf`) and ends at `(1, 1)`.
pub fn roc_from_scores(positives: &[f64], negatives: &[f64]) -> Result<RocCurve> {
    if positives.is_empty() || negatives.is_empty() {
        return param("ROC needs nonempty positive and negative sets");
    }
    if positives.iter().chain(negatives).any(|v| v.is_nan()) {
        return param("ROC scores must not be NaN");
    }
    let mut scored: Vec<(f64, bool)> = positives
        .iter()
        .map(|&s| (s, true))
        .chain(negatives.iter().map(|&s| (s, false)))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));

    let (np, nn) = (positives.len() as f64, negatives.len() as f64);
    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < scored.len() {
        let t = scored[i].0;
        while i < scored.len() && scored[i].0 == t {
            if scored[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold: t,
            fpr: fp as f64 / nn,
            tpr: tp as f64 / np,
        });
    }
    let auc = trapezoid_auc(&points);
    Ok(RocCurve { points, auc })
}

/// ROC of `saliency` on row-major pixel index sets.
pub fn roc_curve(
    saliency: &SaliencyMap,
    positives: &[usize],
    negatives: &[usize],
) -> Result<RocCurve> {
    let vals = saliency.values().as_slice();
    let lookup = |set: &[usize]| -> Result<Vec<f64>> {
        set.iter()
            .map(|&i| {
                vals.get(i)
                    .copied()
                    .ok_or_else(|| Error::Parameter(format!("pixel index {i} out of range")))
            })
            .collect()
    };
    let pos: BTreeSet<usize> = positives.iter().copied().collect();
    if negatives.iter().any(|i| pos.contains(i)) {
        return param("positive and negative pixel sets overlap");
    }
    roc_from_scores(&lookup(positives)?, &lookup(negatives)?)
}

/// How per-image results are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    /// AUC per image, then the mean.
    #[default]
    PerImage,
    /// One ROC over the union of all images' samples.
    Pooled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOptions {
    pub positive_quantile: f64,
    pub seed: u64,
    pub aggregation: Aggregation,
}

impl Default for CvOptions {
    fn default() -> Self {
        Self {
            positive_quantile: DEFAULT_POSITIVE_QUANTILE,
            seed: 0,
            aggregation: Aggregation::PerImage,
        }
    }
}

/// Mean AUC of every (scale, slice) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AucMatrix {
    pub scales: Vec<usize>,
    pub slices: Vec<usize>,
    /// `mean_auc[scale][slice]`.
    pub mean_auc: Vec<Vec<f64>>,
    /// Images with a nonempty fixation map, per slice.
    pub n_images: Vec<usize>,
    pub seed: u64,
    /// Pooled ROC curve per `[scale][slice]`, for plotting.
    pub pooled: Vec<Vec<Option<RocCurve>>>,
}

impl AucMatrix {
    /// AUC by position in `scales` / `slices`.
    pub fn auc(&self, scale_pos: usize, slice_pos: usize) -> f64 {
        self.mean_auc[scale_pos][slice_pos]
    }

    /// Write `scale,slice,mean_auc,n_images,seed` rows.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["scale", "slice", "mean_auc", "n_images", "seed"])?;
        for (si, scale) in self.scales.iter().enumerate() {
            for (ti, slice) in self.slices.iter().enumerate() {
                w.write_record([
                    scale.to_string(),
                    slice.to_string(),
                    self.mean_auc[si][ti].to_string(),
                    self.n_images[ti].to_string(),
                    self.seed.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn derived_seed(seed: u64, image: usize, slice: usize) -> u64 {
    // splitmix-style mixing so neighbouring (image, slice) pairs decorrelate
    let mut z = seed
        ^ (image as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (slice as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Positives and seeded negatives for one fixation map.
pub fn sample_labels(fix: &FixationMap, q: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let positives = fix.top_quantile_pixels(q);
    if positives.is_empty() {
        return (positives, Vec::new());
    }
    let pos: BTreeSet<usize> = positives.iter().copied().collect();
    let rest: Vec<usize> = (0..fix.values().len())
        .filter(|i| !pos.contains(i))
        .collect();
    let want = positives.len().min(rest.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut negatives: Vec<usize> = sample_indices(&mut rng, rest.len(), want)
        .into_iter()
        .map(|i| rest[i])
        .collect();
    negatives.sort_unstable();
    (positives, negatives)
}

/// Evaluate every image's saliency maps against its per-slice fixation maps.
///
/// `maps[image]` lists one map per scale (same scales, same order, for every
/// image); `fixations[image]` lists one map per slice.
pub fn cross_validate(
    maps: &BTreeMap<String, Vec<SaliencyMap>>,
    fixations: &BTreeMap<String, Vec<FixationMap>>,
    opts: &CvOptions,
) -> Result<AucMatrix> {
    if !(opts.positive_quantile > 0.0 && opts.positive_quantile <= 1.0) {
        return param("positive quantile must be in (0, 1]");
    }
    for id in maps.keys() {
        if !fixations.contains_key(id) {
            return Err(Error::MissingImage(format!("{id} (no fixation maps)")));
        }
    }
    for id in fixations.keys() {
        if !maps.contains_key(id) {
            return Err(Error::MissingImage(format!("{id} (no saliency maps)")));
        }
    }
    let first_maps = maps
        .values()
        .next()
        .ok_or_else(|| Error::Parameter("no images".into()))?;
    let first_fix = &fixations[maps.keys().next().expect("nonempty")];
    let scales: Vec<usize> = first_maps.iter().map(|m| m.scale_index()).collect();
    let slices: Vec<usize> = first_fix.iter().map(|f| f.slice_index()).collect();
    if scales.len() < 2 || slices.len() < 2 {
        return param("cross-validation needs at least two scales and two slices");
    }

    let (ns, nt) = (scales.len(), slices.len());
    let mut sums = vec![vec![0.0; nt]; ns];
    let mut n_images = vec![0usize; nt];
    let mut pooled_pos = vec![vec![Vec::new(); nt]; ns];
    let mut pooled_neg = vec![vec![Vec::new(); nt]; ns];

    for (img_idx, (id, img_maps)) in maps.iter().enumerate() {
        let fix = &fixations[id];
        if img_maps
            .iter()
            .map(|m| m.scale_index())
            .ne(scales.iter().copied())
        {
            return param(format!("image `{id}` has a different set of scales"));
        }
        if fix
            .iter()
            .map(|f| f.slice_index())
            .ne(slices.iter().copied())
        {
            return param(format!("image `{id}` has a different set of slices"));
        }
        for (ti, fmap) in fix.iter().enumerate() {
            for m in img_maps {
                m.values().same_shape(fmap.values(), id)?;
            }
            let (pos, neg) = sample_labels(
                fmap,
                opts.positive_quantile,
                derived_seed(opts.seed, img_idx, ti),
            );
            if pos.is_empty() || neg.is_empty() {
                continue;
            }
            n_images[ti] += 1;
            for (si, m) in img_maps.iter().enumerate() {
                let v = m.values().as_slice();
                let ps: Vec<f64> = pos.iter().map(|&i| v[i]).collect();
                let ns_: Vec<f64> = neg.iter().map(|&i| v[i]).collect();
                sums[si][ti] += roc_from_scores(&ps, &ns_)?.auc();
                pooled_pos[si][ti].extend(ps);
                pooled_neg[si][ti].extend(ns_);
            }
        }
    }

    let mut mean_auc = vec![vec![f64::NAN; nt]; ns];
    let mut pooled = vec![vec![None; nt]; ns];
    for si in 0..ns {
        for ti in 0..nt {
            if n_images[ti] == 0 {
                continue;
            }
            let curve = roc_from_scores(&pooled_pos[si][ti], &pooled_neg[si][ti])?;
            mean_auc[si][ti] = match opts.aggregation {
                Aggregation::PerImage => sums[si][ti] / n_images[ti] as f64,
                Aggregation::Pooled => curve.auc(),
            };
            pooled[si][ti] = Some(curve);
        }
    }
    Ok(AucMatrix {
        scales,
        slices,
        mean_auc,
        n_images,
        seed: opts.seed,
        pooled,
    })
}

/// Draw `n` pixel locations `(x, y)` with probability proportional to
/// `density^gamma`.
pub fn sample_from_density<R: Rng>(
    density: &Field,
    gamma: f64,
    n: usize,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    let weights: Vec<f64> = density
        .as_slice()
        .iter()
        .map(|&v| v.max(0.0).powf(gamma))
        .collect();
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w;
        cumulative.push(acc);
    }
    if acc <= 0.0 {
        return Vec::new();
    }
    let w = density.width();
    (0..n)
        .map(|_| {
            let u = rng.gen::<f64>() * acc;
            let i = cumulative
                .partition_point(|&c| c <= u)
                .min(weights.len() - 1);
            (i % w, i / w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest() -> Manifest {
        let mut m = Manifest::default();
        m.insert("a", 32, 16);
        m
    }

    #[test]
    fn loads_well_formed_rows() {
        let csv = "subject_id,image_id,t_ms,x,y\ns1,a,120,3,4\ns1,a,250.5,31,15\ns2,a,0,0,0\n";
        let rep = load_fixations(csv.as_bytes(), &manifest(), Strictness::Strict).unwrap();
        assert_eq!(rep.records.len(), 3);
        assert_eq!(rep.records[1].x, 31);
        assert!(rep.skipped.is_empty());
    }

    #[test]
    fn empty_file_with_header() {
        let rep = load_fixations(
            "subject_id,image_id,t_ms,x,y\n".as_bytes(),
            &manifest(),
            Strictness::Strict,
        )
        .unwrap();
        assert!(rep.records.is_empty());
    }

    #[test]
    fn bad_rows_strict_vs_lenient() {
        let csv = "subject_id,image_id,t_ms,x,y\ns1,a,120,3,4\ns1,a,130,32,4\ns1,b,1,1,1\ns1,a,-5,1,1\ns1,a,x,1,1\ns1,a,140,1,1\n";
        let rep = load_fixations(csv.as_bytes(), &manifest(), Strictness::Lenient).unwrap();
        assert_eq!(rep.records.len(), 2);
        let lines: Vec<u64> = rep.skipped.iter().map(|s| s.line).collect();
        assert_eq!(lines, vec![3, 4, 5, 6]);
        match load_fixations(csv.as_bytes(), &manifest(), Strictness::Strict) {
            Err(Error::Record { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a row error, got {other:?}"),
        }
    }

    #[test]
    fn manifest_parsing() {
        let m = load_manifest("image_id,width,height\nfoo,64,48\n".as_bytes()).unwrap();
        assert_eq!(m.size("foo"), Some((64, 48)));
        assert!(load_manifest("image_id,width,height\nfoo,0,48\n".as_bytes()).is_err());
    }

    fn rec(t: f64) -> FixationRecord {
        FixationRecord {
            subject_id: "s".into(),
            image_id: "a".into(),
            t_ms: t,
            x: 0,
            y: 0,
        }
    }

    #[test]
    fn slicing_follows_half_open_edges() {
        let spec = TimeSliceSpec::new(vec![100.0, 300.0, 500.0], 100.0).unwrap();
        let s = slice_fixations(&[rec(50.0), rec(150.0), rec(350.0)], &spec);
        assert_eq!(s[0].iter().map(|r| r.t_ms).collect::<Vec<_>>(), vec![150.0]);
        assert_eq!(s[1].iter().map(|r| r.t_ms).collect::<Vec<_>>(), vec![350.0]);
        let s = slice_fixations(&[rec(300.0), rec(500.0), rec(100.0)], &spec);
        assert_eq!(s[1][0].t_ms, 300.0);
        assert_eq!(s[0][0].t_ms, 100.0);
        assert_eq!(s[0].len() + s[1].len(), 2);
        assert!(slice_fixations(&[], &spec).iter().all(Vec::is_empty));
    }

    #[test]
    fn slice_spec_validation() {
        assert!(TimeSliceSpec::new(vec![100.0], 0.0).is_err());
        assert!(TimeSliceSpec::new(vec![100.0, 100.0], 0.0).is_err());
        assert!(TimeSliceSpec::new(vec![50.0, 100.0], 100.0).is_err());
        assert!(TimeSliceSpec::with_default_discard(vec![100.0, 400.0, 800.0]).is_ok());
    }

    #[test]
    fn fixation_map_contracts() {
        let mut r = rec(0.0);
        r.x = 10;
        r.y = 20;
        let m = fixation_map(&[r.clone()], 32, 32, 0.0, 0).unwrap();
        assert_eq!(m.values().get(20, 10), 1.0);
        assert_eq!(m.values().sum(), 1.0);

        let m = fixation_map(&[r], 32, 32, 2.0, 1).unwrap();
        assert_eq!(m.values().argmax(), (20, 10));
        assert!((m.values().sum() - 1.0).abs() < 1e-9);
        assert_eq!(m.slice_index(), 1);

        let e = fixation_map(&[], 8, 8, 1.0, 0).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.values().max(), 0.0);
    }

    #[test]
    fn roc_perfect_and_chance() {
        let mut f = Field::zeros(4, 4);
        for i in [0usize, 5, 10] {
            f.as_mut_slice()[i] = 1.0;
        }
        let sal = SaliencyMap::from_normalized(f, 1).unwrap();
        let roc = roc_curve(&sal, &[0, 5, 10], &[1, 2, 3, 4, 6]).unwrap();
        assert_eq!(roc.auc(), 1.0);
        let flat = SaliencyMap::from_normalized(Field::filled(4, 4, 0.5), 1).unwrap();
        let roc = roc_curve(&flat, &[0, 5], &[1, 2]).unwrap();
        assert_eq!(roc.auc(), 0.5);
        assert_eq!(roc.points().len(), 2);
        assert!(roc_curve(&flat, &[], &[1]).is_err());
        assert!(roc_curve(&flat, &[1], &[1]).is_err());
    }

    #[test]
    fn top_quantile_excludes_zero_density() {
        let mut r = rec(0.0);
        r.x = 3;
        r.y = 2;
        let m = fixation_map(&[r], 8, 8, 0.0, 0).unwrap();
        assert_eq!(m.top_quantile_pixels(0.5), vec![2 * 8 + 3]);
        let (p, n) = sample_labels(&m, 0.05, 7);
        assert_eq!(p.len(), 1);
        assert_eq!(n.len(), 1);
        assert_ne!(n[0], p[0]);
    }

    #[test]
    fn cross_validate_requires_matching_images() {
        let sal = SaliencyMap::from_normalized(Field::zeros(4, 4), 1).unwrap();
        let fix = fixation_map_from_points(&[(1, 1)], 4, 4, 0.0, 0).unwrap();
        let mut maps = BTreeMap::new();
        maps.insert("a".to_string(), vec![sal.clone(), sal]);
        let mut fixes = BTreeMap::new();
        fixes.insert("b".to_string(), vec![fix.clone(), fix]);
        assert!(matches!(
            cross_validate(&maps, &fixes, &CvOptions::default()),
            Err(Error::MissingImage(_))
        ));
    }

    #[test]
    fn density_sampling_stays_on_support() {
        let mut d = Field::zeros(6, 5);
        d.set(4, 2, 3.0);
        d.set(1, 0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts = sample_from_density(&d, 1.0, 400, &mut rng);
        assert!(pts.iter().all(|&p| p == (2, 4) || p == (0, 1)));
        let heavy = pts.iter().filter(|&&p| p == (2, 4)).count();
        assert!(heavy > 250 && heavy < 350);
    }
}
