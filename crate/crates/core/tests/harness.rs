use std::fs;
use std::path::{Path, PathBuf};

use scanpath_core::analysis::GuiGroup;
use scanpath_core::harness::{
    emit, evaluate_config, generate_fixture, load_manifest, load_result_json, results_csv, run_sweep,
    write_scanpath_csv, ImageStatus, OutputFormat, SweepAxis, SweepGrid, SweepOptions,
};
use scanpath_core::saliency::{load_density_map, save_density_map};
use scanpath_core::{rollout, DecayKind, GuiImage, GuiType, ImageDims, Metric, RolloutConfig, SaliencyBackend, SaliencyMap};

fn fixture_manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic/manifest.json")
}

fn file_backend() -> SweepOptions {
    SweepOptions {
        backend: SaliencyBackend::DensityFile,
        ..SweepOptions::default()
    }
}

/// One image whose two viewers both follow the model's own rollout.
fn self_comparison_dataset(dir: &Path, images: &[(&str, GuiType)]) -> PathBuf {
    let side = 225;
    let values: Vec<f64> = (0..side * side)
        .map(|k| {
            let (r, c) = ((k / side) as f64, (k % side) as f64);
            1.0 + ((r - 60.0).powi(2) + (c - 150.0).powi(2)).sqrt().recip().min(1.0) + 0.001 * ((r * 7.0 + c * 3.0) % 11.0)
        })
        .collect();
    let map = SaliencyMap::new(side, side, values).unwrap();
    let pred = rollout(&map, &RolloutConfig::default()).unwrap();
    let dims = ImageDims::new(side, side).unwrap();
    let mut entries = Vec::new();
    for (id, gui) in images {
        GuiImage::filled(side, side, [200, 200, 200]).unwrap().save_png(dir.join(format!("{id}.png"))).unwrap();
        save_density_map(&map, dir.join(format!("{id}.txt"))).unwrap();
        let viewers = [
            pred.clone().with_ids(*id, Some("a".into())),
            pred.clone().with_ids(*id, Some("b".into())),
        ];
        let f = fs::File::create(dir.join(format!("{id}.csv"))).unwrap();
        write_scanpath_csv(f, &viewers, dims).unwrap();
        entries.push(serde_json::json!({
            "image_id": id, "image_path": format!("{id}.png"), "gui_type": gui,
            "scanpath_paths": [format!("{id}.csv")], "density_map_path": format!("{id}.txt"),
            "partition": "test",
        }));
    }
    let m = dir.join("manifest.json");
    fs::write(&m, serde_json::json!({ "entries": entries }).to_string()).unwrap();
    m
}

#[test]
fn self_comparison_gives_zero_dtw() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = load_manifest(self_comparison_dataset(dir.path(), &[("only", GuiType::Web)])).unwrap();
    let r = evaluate_config(&manifest, &RolloutConfig::default(), &file_backend()).unwrap();
    let row = r.row("side=225", GuiGroup::Type(GuiType::Web), Metric::Dtw).unwrap();
    assert!(row.mean.abs() < 1e-12, "dtw {}", row.mean);
    assert_eq!(row.sd, 0.0);
    assert_eq!(row.n, 1);
    let eye = r.row("side=225", GuiGroup::All, Metric::Eyenalysis).unwrap();
    assert!(eye.mean.abs() < 1e-12);
}

#[test]
fn rows_for_each_type_plus_all() {
    let dir = tempfile::tempdir().unwrap();
    let manifest =
        load_manifest(self_comparison_dataset(dir.path(), &[("p", GuiType::Poster), ("m", GuiType::Mobile)])).unwrap();
    let r = evaluate_config(&manifest, &RolloutConfig::default(), &file_backend()).unwrap();
    let groups: Vec<GuiGroup> = r.rows.iter().filter(|x| x.metric == Metric::Dtw).map(|x| x.gui_type).collect();
    assert_eq!(
        groups,
        [GuiGroup::Type(GuiType::Poster), GuiGroup::Type(GuiType::Mobile), GuiGroup::All]
    );
    assert_eq!(r.rows.len(), 3 * 4);
}

#[test]
fn gamma_sweep_matches_golden_csv() {
    let manifest = load_manifest(fixture_manifest()).unwrap();
    let r = run_sweep(&manifest, &SweepGrid::default(), SweepAxis::Gamma, &SweepOptions::default()).unwrap();
    let golden = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fixture_gamma_results.csv"))
        .unwrap();
    assert_eq!(results_csv(&r), golden);
}

#[test]
fn diagnostics_cover_every_image_for_every_config() {
    let manifest = load_manifest(fixture_manifest()).unwrap();
    let grid = SweepGrid {
        fixation_counts: vec![5, 10],
        ..SweepGrid::default()
    };
    let r = run_sweep(&manifest, &grid, SweepAxis::NFixations, &file_backend()).unwrap();
    for cfg in ["nfix=5", "nfix=10"] {
        let d: Vec<_> = r.diagnostics.iter().filter(|d| d.config == cfg).collect();
        assert_eq!(d.len(), manifest.entries.len());
        let ok = d.iter().filter(|d| d.status == ImageStatus::Succeeded).count();
        let failed = d.iter().filter(|d| d.status == ImageStatus::Failed).count();
        assert_eq!(ok + failed, 12);
        assert!(d.iter().all(|d| d.clamped == 1));
    }
}

#[test]
fn failed_images_are_recorded_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_fixture(dir.path()).unwrap();
    // A density map of the wrong kind for one image.
    fs::write(dir.path().join("maps/web_03.txt"), "2 1\n0 0\n").unwrap();
    let manifest = load_manifest(&m).unwrap();
    let r = evaluate_config(&manifest, &RolloutConfig::default(), &file_backend()).unwrap();
    assert_eq!(r.failed_images(), 1);
    let bad = r.diagnostics.iter().find(|d| d.status == ImageStatus::Failed).unwrap();
    assert_eq!(bad.image_id, "web_03");
    assert!(!bad.message.is_empty());
    assert_eq!(r.row("side=225", GuiGroup::All, Metric::Dtw).unwrap().n, 11);
}

#[test]
fn config_without_successes_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_fixture(dir.path()).unwrap();
    for e in fs::read_dir(dir.path().join("maps")).unwrap() {
        fs::write(e.unwrap().path(), "1 1\n0\n").unwrap();
    }
    let manifest = load_manifest(&m).unwrap();
    assert!(evaluate_config(&manifest, &RolloutConfig::default(), &file_backend()).is_err());
}

#[test]
fn huge_radius_on_flat_maps_uses_fallback() {
    let manifest = load_manifest(fixture_manifest()).unwrap();
    let map = load_density_map(&manifest.entries[0].density_map_path.clone().unwrap(), None, false).unwrap();
    assert!(map.values().iter().all(|&v| v == map.values()[0]), "fixture maps are flat");
    let opts = SweepOptions {
        base: RolloutConfig {
            decay: DecayKind::Full,
            ..RolloutConfig::default()
        },
        ..file_backend()
    };
    let grid = SweepGrid {
        radii: vec![0.9],
        ..SweepGrid::default()
    };
    let r = run_sweep(&manifest, &grid, SweepAxis::Radius, &opts).unwrap();
    assert_eq!(r.failed_images(), 0);
    assert!(r.diagnostics.iter().all(|d| d.fallback_steps > 0));
}

#[test]
fn ior_compare_reports_one_test_per_metric() {
    let manifest = load_manifest(fixture_manifest()).unwrap();
    let r = run_sweep(&manifest, &SweepGrid::default(), SweepAxis::IorCompare, &file_backend()).unwrap();
    assert_eq!(r.tests.len(), 4);
    for (t, m) in r.tests.iter().zip(Metric::ALL) {
        assert_eq!(t.metric, m);
        assert_eq!((t.config_a.as_str(), t.config_b.as_str()), ("decay=linear", "decay=gamma"));
        if let Some(res) = &t.result {
            assert_eq!(res.degrees_of_freedom, manifest.entries.len() - 1);
        }
    }
}

#[test]
fn metadata_pins_non_axis_parameters() {
    let manifest = load_manifest(fixture_manifest()).unwrap();
    let r = run_sweep(&manifest, &SweepGrid::default(), SweepAxis::Radius, &file_backend()).unwrap();
    let meta = &r.metadata;
    assert_eq!(meta.axis, Some(SweepAxis::Radius));
    assert_eq!(meta.configs.len(), 5);
    for c in &meta.configs {
        let mut expected = meta.defaults;
        expected.mask_radius_frac = c.rollout.mask_radius_frac;
        assert_eq!(c.rollout, expected);
        assert_eq!((c.width, c.height), (225, 225));
    }
    assert_eq!(meta.rho, 0.1);
    assert_eq!(meta.n_images, 12);
    assert_eq!(meta.backend, "file");
}

#[test]
fn partition_filter_restricts_images() {
    let manifest = load_manifest(fixture_manifest()).unwrap();
    let opts = SweepOptions {
        partition: Some(scanpath_core::harness::Partition::Train),
        ..file_backend()
    };
    let r = evaluate_config(&manifest, &RolloutConfig::default(), &opts).unwrap();
    assert_eq!(r.diagnostics.len(), 4);
}

#[test]
fn json_emission_round_trips_a_real_sweep() {
    let manifest = load_manifest(fixture_manifest()).unwrap();
    let r = run_sweep(&manifest, &SweepGrid::default(), SweepAxis::IorCompare, &file_backend()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = emit(&r, OutputFormat::Json, dir.path()).unwrap();
    assert_eq!(load_result_json(&files[0]).unwrap(), r);
}

#[test]
fn committed_fixture_matches_generator() {
    let dir = tempfile::tempdir().unwrap();
    generate_fixture(dir.path()).unwrap();
    let committed = fixture_manifest().parent().unwrap().to_path_buf();
    let mut checked = 0;
    for sub in ["boxes", "scanpaths", "maps", "images"] {
        for e in fs::read_dir(dir.path().join(sub)).unwrap() {
            let p = e.unwrap().path();
            let name = p.file_name().unwrap();
            let other = committed.join(sub).join(name);
            if sub == "images" {
                assert_eq!(GuiImage::open(&p).unwrap(), GuiImage::open(&other).unwrap(), "{}", p.display());
            } else {
                assert_eq!(fs::read(&p).unwrap(), fs::read(&other).unwrap(), "{}", p.display());
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 48);
    assert_eq!(
        fs::read(dir.path().join("manifest.json")).unwrap(),
        fs::read(committed.join("manifest.json")).unwrap()
    );
}
