use graspness::commands::{compute_landscape, read_landscape, write_landscape};
use graspness::ply::PlyFormat;
use graspness::scene_file::{random_scene, SceneFile};
use graspness::Config;
use graspness_core::scene::CONTACT_TOLERANCE;

#[test]
fn random_scenes_do_not_interpenetrate() {
    for seed in 0..100 {
        let file = random_scene(None, seed).unwrap();
        assert_eq!(SceneFile::from_json(&file.to_json()).unwrap(), file);
        let scene = file.assemble(0.01, seed).unwrap();
        for (i, a) in scene.instances.iter().enumerate() {
            for p in &scene.object_cloud(i).positions {
                assert!(p.z >= -CONTACT_TOLERANCE, "scene {seed}: object {} below the table", a.id);
                for b in scene.instances.iter().filter(|b| b.id != a.id) {
                    let d = b.shape.sdf(&b.pose.inverse_apply_point(p));
                    assert!(d > 0.0, "scene {seed}: object {} enters object {} by {d}", a.id, b.id);
                }
            }
        }
    }
}

#[test]
fn landscape_files_round_trip() {
    let mut cfg = Config::from_toml("[grid]\nviews = 5\nangles = 2\ndepths = [0.02]\n[engine]\nsample_spacing = 0.012\n").unwrap();
    let scene = random_scene(Some(3), 8).unwrap().assemble(0.012, 8).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for (ascii, name) in [(false, "bin.ply"), (true, "text.ply")] {
        cfg.render.ascii = ascii;
        let file = compute_landscape(&cfg, &scene, None, false).unwrap();
        let format = if ascii { PlyFormat::Ascii } else { PlyFormat::BinaryLittleEndian };
        let path = dir.path().join(name);
        write_landscape(&path, &file, format).unwrap();
        let back = read_landscape(&path, &cfg).unwrap();
        let (a, b) = (&file.landscape, &back.landscape);
        assert_eq!(a.positions, b.positions);
        assert_eq!(a.object_ids, b.object_ids);
        assert_eq!(a.point, b.point);
        assert!(b.normalized);
        // Views are stored in single precision.
        assert!(a.view.iter().zip(&b.view).all(|(x, y)| (x - y).abs() <= 1e-7));
    }
}
