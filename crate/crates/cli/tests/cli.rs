use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sss_saliency::io::{load_image, read_pfm};
use sss_saliency::synthetic::natural_like;
use sss_saliency::{saliency_sequence, Field, ScaleSelection, SequenceOptions};
use tempfile::TempDir;

fn sss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sss"))
        .args(args)
        .output()
        .expect("spawn sss")
}

fn s(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn write_png(path: &Path, f: &Field) {
    let (h, w) = f.shape();
    let buf = f
        .as_slice()
        .iter()
        .map(|v| (v * 255.0).round() as u8)
        .collect();
    image::GrayImage::from_raw(w as u32, h as u32, buf)
        .unwrap()
        .save(path)
        .unwrap();
}

fn setup(size: usize) -> (TempDir, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let img = tmp.path().join("scene.png");
    write_png(&img, &natural_like(size, 4));
    (tmp, img)
}

fn count(dir: &Path, ext: &str) -> usize {
    fs::read_dir(dir)
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .path()
                .extension()
                .is_some_and(|x| x == ext)
        })
        .count()
}

#[test]
fn sequence_writes_one_pair_per_scale() {
    let (tmp, img) = setup(64);
    let out = tmp.path().join("all");
    let r = sss(&["sequence", &s(&img), "--out", &s(&out)]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(count(&out, "pfm"), 7);
    assert_eq!(count(&out, "png"), 7);
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("scene.json")).unwrap()).unwrap();
    assert_eq!(sidecar["scale_count"], 7);
    assert_eq!(sidecar["scales"].as_array().unwrap().len(), 7);

    let some = tmp.path().join("some");
    let r = sss(&["sequence", &s(&img), "--scales", "1,3", "--out", &s(&some)]);
    assert!(r.status.success());
    assert_eq!(count(&some, "pfm"), 2);
    assert!(some.join("scene_k1.pfm").is_file() && some.join("scene_k3.pfm").is_file());
}

#[test]
fn pfm_output_matches_library_within_f32() {
    let (tmp, img) = setup(32);
    let out = tmp.path().join("o");
    assert!(
        sss(&["sequence", &s(&img), "--scales", "2,5", "--out", &s(&out)])
            .status
            .success()
    );
    let input = load_image(&img, None).unwrap();
    let opts = SequenceOptions {
        scales: ScaleSelection::Indices(vec![2, 5]),
        ..Default::default()
    };
    let seq = saliency_sequence(&input, &opts).unwrap();
    for m in seq.maps() {
        let back = read_pfm(&out.join(format!("scene_k{}.pfm", m.scale_index()))).unwrap();
        assert!(back.max_abs_diff(m.values()) < 1e-6);
    }
}

#[test]
fn sigma_selection_and_resize() {
    let (tmp, img) = setup(40);
    let out = tmp.path().join("o");
    let r = sss(&[
        "sequence",
        &s(&img),
        "--sigmas",
        "0,2.5",
        "--resize",
        "32x24",
        "--out",
        &s(&out),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(
        read_pfm(&out.join("scene_k2.pfm")).unwrap().shape(),
        (24, 32)
    );
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("scene.json")).unwrap()).unwrap();
    assert_eq!(sidecar["scales"][1]["sigma"], 2.5);
}

#[test]
fn empty_directory_is_a_warning() {
    let tmp = tempfile::tempdir().unwrap();
    let r = sss(&[
        "sequence",
        &s(tmp.path()),
        "--out",
        &s(&tmp.path().join("o")),
    ]);
    assert!(r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("no input images"));
}

#[test]
fn bad_inputs_fail_only_in_strict_mode() {
    let (tmp, img) = setup(16);
    let broken = tmp.path().join("broken.png");
    fs::write(&broken, b"not an image").unwrap();
    let out = tmp.path().join("o");
    let lenient = sss(&["sequence", &s(&img), &s(&broken), "--out", &s(&out)]);
    assert!(lenient.status.success());
    assert_eq!(count(&out, "pfm"), 5);
    let strict = sss(&[
        "sequence",
        &s(&img),
        &s(&broken),
        "--strict",
        "--out",
        &s(&out),
    ]);
    assert_eq!(strict.status.code(), Some(1));
    let range = sss(&[
        "sequence",
        &s(&img),
        "--scales",
        "9",
        "--strict",
        "--out",
        &s(&out),
    ]);
    assert_eq!(range.status.code(), Some(1));
}

#[test]
fn baselines() {
    let (tmp, img) = setup(32);
    let all = tmp.path().join("all");
    assert!(sss(&["baseline", &s(&img), "--out", &s(&all)])
        .status
        .success());
    assert_eq!(count(&all, "pfm"), 3);
    for m in ["pft", "sr", "ft"] {
        assert!(all.join(format!("scene_{m}.png")).is_file());
    }
    let one = tmp.path().join("one");
    assert!(
        sss(&["baseline", &s(&img), "--model", "sr", "--out", &s(&one)])
            .status
            .success()
    );
    assert_eq!(count(&one, "pfm"), 1);
    assert_eq!(
        sss(&["baseline", &s(&img), "--model", "itti"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sss(&["baseline", &s(&img), "--sr-window", "4", "--out", &s(&one)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn demo_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path();
    assert!(sss(&["demo1d", "--only", "fig7", "--out", &s(out)])
        .status
        .success());
    let fig7 = fs::read_to_string(out.join("fig7_sharpness.csv")).unwrap();
    assert_eq!(fig7.lines().count(), 4);
    assert!(fig7.starts_with("N,sharpness\n4,"));
    assert!(!out.join("fig8_trace.csv").exists());

    assert!(sss(&["demo1d", "--only", "fig8", "--out", &s(out)])
        .status
        .success());
    let fig8 = fs::read_to_string(out.join("fig8_trace.csv")).unwrap();
    assert!(fig8.starts_with("t,original,reconstruction,saliency,removed\n"));
    assert_eq!(fig8.lines().count(), 513);
}

fn eval_fixture(tmp: &Path, bad_row: bool) -> [String; 3] {
    let maps = tmp.join("maps");
    let img = tmp.join("a.png");
    write_png(&img, &natural_like(32, 1));
    assert!(sss(&["sequence", &s(&img), "--out", &s(&maps)])
        .status
        .success());
    fs::write(tmp.join("manifest.csv"), "image_id,width,height\na,32,32\n").unwrap();
    let mut csv = String::from("subject_id,image_id,t_ms,x,y\n");
    for i in 0..40 {
        csv += &format!("s1,a,{},{},{}\n", 120 + i * 17, (i * 7) % 32, (i * 11) % 32);
    }
    if bad_row {
        csv += "s1,a,300,99,3\n";
    }
    fs::write(tmp.join("fix.csv"), csv).unwrap();
    [
        s(&tmp.join("fix.csv")),
        s(&tmp.join("manifest.csv")),
        s(&maps),
    ]
}

#[test]
fn eval_writes_matrix_and_curves() {
    let tmp = tempfile::tempdir().unwrap();
    let [fix, manifest, maps] = eval_fixture(tmp.path(), true);
    let out = tmp.path().join("eval");
    let args = [
        "eval",
        "--fixations",
        &fix,
        "--manifest",
        &manifest,
        "--maps",
        &maps,
        "--edges",
        "100,400,900",
        "--scales",
        "1,6",
        "--out",
        &s(&out),
    ];
    let r = sss(&args);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(String::from_utf8_lossy(&r.stderr).contains("fix.csv:42"));
    let matrix = fs::read_to_string(out.join("auc_matrix.csv")).unwrap();
    assert!(matrix.starts_with("scale,slice,mean_auc,n_images,seed\n"));
    assert_eq!(matrix.lines().count(), 5);
    assert!(out.join("roc_k6_s2.csv").is_file());
    let roc = fs::read_to_string(out.join("roc_k1_s1.csv")).unwrap();
    assert!(roc.starts_with("threshold,fpr,tpr\n"));

    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(sss(&strict).status.code(), Some(1));
}

#[test]
fn eval_usage_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let [fix, manifest, maps] = eval_fixture(tmp.path(), false);
    let missing = s(&tmp.path().join("nope.csv"));
    let base = |m: &str, edges: &str| {
        sss(&[
            "eval",
            "--fixations",
            &fix,
            "--manifest",
            m,
            "--maps",
            &maps,
            "--edges",
            edges,
        ])
    };
    assert_eq!(base(&missing, "100,400,900").status.code(), Some(2));
    assert_eq!(base(&manifest, "400,100").status.code(), Some(2));
    assert_eq!(base(&manifest, "50,400").status.code(), Some(2));
}
