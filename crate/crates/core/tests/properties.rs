use proptest::prelude::*;
use sss_saliency::baselines::{pft_saliency, sr_saliency};
use sss_saliency::fixation::roc_from_scores;
use sss_saliency::scale_space::{enhance_saliency, scale_count};
use sss_saliency::spectral::FrequencyKernel;
use sss_saliency::{
    build_scale_space, forward_transform, inverse_transform, sharpness, smooth_amplitude, Field,
};

fn field(max_side: usize) -> impl Strategy<Value = Field> {
    (2..=max_side, 2..=max_side).prop_flat_map(|(h, w)| {
        prop::collection::vec(0.0f64..1.0, h * w)
            .prop_map(move |data| Field::new(h, w, data).unwrap())
    })
}

fn ceil_log2(m: usize) -> usize {
    let mut e = 0;
    while (1usize << e) < m {
        e += 1;
    }
    e
}

#[test]
fn scale_count_over_full_range() {
    for m in 2..=4096usize {
        assert_eq!(scale_count(m, 4096), ceil_log2(m) + 1);
        assert_eq!(scale_count(4096, m), ceil_log2(m) + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip(img in field(16)) {
        let back = inverse_transform(&forward_transform(&img).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&img) < 1e-9);
    }

    #[test]
    fn linear_smoothing_conserves_sum_and_sign(img in field(12), sigma in 0.3f64..6.0) {
        let spec = forward_transform(&img).unwrap();
        let kernel = FrequencyKernel::gaussian(sigma).unwrap();
        let out = smooth_amplitude(&spec, &kernel, false).unwrap();
        let total = spec.amplitude().sum();
        prop_assert!((out.sum() - total).abs() <= 1e-6 * total.max(1.0));
        prop_assert!(out.min() >= 0.0);
        let log = smooth_amplitude(&spec, &kernel, true).unwrap();
        prop_assert!(log.min() >= 0.0);
    }

    #[test]
    fn sharpness_of_constants_is_one(c in 0.01f64..50.0, h in 2usize..9, w in 2usize..9, s in 0.5f64..4.0) {
        let p = sharpness(&Field::filled(h, w, c), s).unwrap();
        prop_assert!(p.as_slice().iter().all(|v| (v - 1.0).abs() < 1e-9));
    }

    #[test]
    fn layer_total_variation_is_non_increasing(img in field(16), use_log in any::<bool>()) {
        let spec = forward_transform(&img).unwrap();
        let sss = build_scale_space(&spec, 0.5, use_log).unwrap();
        let tv: Vec<f64> = sss.layers().iter().map(Field::total_variation).collect();
        for p in tv.windows(2) {
            prop_assert!(p[1] <= p[0] * (1.0 + 1e-9) + 1e-9, "{:?}", tv);
        }
    }

    #[test]
    fn enhance_argmax_matches_squared_raw(raw in field(10)) {
        let shifted = raw.map(|v| v - 0.37);
        let m = enhance_saliency(&shifted, 0.0).unwrap();
        let v = m.values();
        prop_assert!(v.as_slice().iter().all(|x| x.is_finite() && (0.0..=1.0).contains(x)));
        let sq = shifted.map(|x| x * x);
        prop_assert_eq!(sq.get(v.argmax().0, v.argmax().1), sq.max());
    }

    #[test]
    fn pft_and_sr_are_translation_covariant(img in field(12), dr in 0usize..12, dc in 0usize..12) {
        let (h, w) = img.shape();
        let (dr, dc) = (dr % h, dc % w);
        let shifted = img.roll(dr, dc);
        let a = pft_saliency(&img, 0.0).unwrap();
        let b = pft_saliency(&shifted, 0.0).unwrap();
        prop_assert!(a.values().roll(dr, dc).max_abs_diff(b.values()) < 1e-6);
        let a = sr_saliency(&img, 3, 0.0).unwrap();
        let b = sr_saliency(&shifted, 3, 0.0).unwrap();
        prop_assert!(a.values().roll(dr, dc).max_abs_diff(b.values()) < 1e-6);
    }

    #[test]
    fn roc_is_a_rank_statistic(
        pos in prop::collection::vec(0.0f64..1.0, 1..40),
        neg in prop::collection::vec(0.0f64..1.0, 1..40),
    ) {
        let roc = roc_from_scores(&pos, &neg).unwrap();
        let auc = roc.auc();
        prop_assert!((0.0..=1.0).contains(&auc));
        let pts = roc.points();
        prop_assert_eq!((pts[0].fpr, pts[0].tpr), (0.0, 0.0));
        let last = pts[pts.len() - 1];
        prop_assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
        for p in pts.windows(2) {
            prop_assert!(p[1].fpr >= p[0].fpr && p[1].tpr >= p[0].tpr);
        }
        let swapped = roc_from_scores(&neg, &pos).unwrap();
        prop_assert!((swapped.auc() - (1.0 - auc)).abs() < 1e-9);
        let f = |v: &f64| (3.0 * v).exp() + v;
        let t = roc_from_scores(
            &pos.iter().map(f).collect::<Vec<_>>(),
            &neg.iter().map(f).collect::<Vec<_>>(),
        ).unwrap();
        prop_assert!((t.auc() - auc).abs() < 1e-9);
        prop_assert_eq!(t.points().len(), pts.len());
    }
}
