use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use majperc_ffi::*;

unsafe fn last_error() -> String {
    CStr::from_ptr(majperc_last_error())
        .to_string_lossy()
        .into_owned()
}

fn lattice(n: u32, k: u32) -> *mut MajpercGraph {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(majperc_lattice_new(n, k, &mut g), MajpercStatus::Ok);
        assert!(!g.is_null());
        g
    }
}

#[test]
fn lattice_handle_reports_shape() {
    unsafe {
        let g = lattice(10, 2);
        let mut nv = 0usize;
        let mut deg = 0u32;
        assert_eq!(majperc_graph_num_vertices(g, &mut nv), MajpercStatus::Ok);
        assert_eq!(majperc_graph_degree(g, &mut deg), MajpercStatus::Ok);
        assert_eq!((nv, deg), (100, 10));

        let mut len = 0usize;
        let status = majperc_graph_neighbours(g, 0, ptr::null_mut(), 0, &mut len);
        assert_eq!(status, MajpercStatus::BufferTooSmall);
        assert_eq!(len, 10);
        let mut buf = vec![0u32; len];
        assert_eq!(
            majperc_graph_neighbours(g, 0, buf.as_mut_ptr(), buf.len(), &mut len),
            MajpercStatus::Ok
        );
        buf.sort_unstable();
        // (0,0) with k = 2: x in {8,9,0,1,2}, y in {1,9}.
        assert_eq!(buf, vec![10, 11, 12, 18, 19, 90, 91, 92, 98, 99]);
        majperc_graph_free(g);
    }
}

#[test]
fn bad_arguments_map_to_status_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            majperc_lattice_new(4, 2, &mut g),
            MajpercStatus::InvalidArgument
        );
        assert!(g.is_null());
        assert!(last_error().contains("wraps"));

        assert_eq!(
            majperc_augmented_new(9, 1, 1, 0, true, &mut g),
            MajpercStatus::Inadmissible
        );
        assert_eq!(
            majperc_lattice_new(8, 1, ptr::null_mut()),
            MajpercStatus::NullPointer
        );
        assert_eq!(
            majperc_graph_degree(ptr::null(), &mut 0),
            MajpercStatus::NullPointer
        );
        assert_eq!(
            majperc_critical_prob(2, &mut 0.0),
            MajpercStatus::InvalidArgument
        );
        assert_eq!(
            majperc_random_initial(4, 1.5, 0, [0u8; 4].as_mut_ptr()),
            MajpercStatus::InvalidArgument
        );

        let l = lattice(8, 1);
        let mut out = ptr::null_mut();
        assert_eq!(
            majperc_graph_matchings_json(l, &mut out),
            MajpercStatus::InvalidArgument
        );
        majperc_graph_free(l);
        majperc_graph_free(ptr::null_mut());
    }
}

#[test]
fn run_matches_core_engine() {
    unsafe {
        use majperc::{engine, matchings, Lattice, Rule};

        let mut g = ptr::null_mut();
        assert_eq!(
            majperc_augmented_new(16, 2, 2, 11, false, &mut g),
            MajpercStatus::Ok
        );
        let core = matchings::AugmentedGraph::new(
            Lattice::stencil(16, 2).unwrap(),
            matchings::sample_admissible(16, 2, 2, 11).unwrap(),
        )
        .unwrap();

        for (seed, p) in [(1u64, 0.3), (2, 0.5), (3, 0.7)] {
            let mut init = vec![0u8; 256];
            assert_eq!(
                majperc_random_initial(256, p, seed, init.as_mut_ptr()),
                MajpercStatus::Ok
            );
            let mut fin = vec![0u8; 256];
            let (mut rounds, mut all) = (0u32, false);
            let status = majperc_run(
                g,
                MajpercRuleKind::Majority,
                2,
                init.as_ptr(),
                256,
                fin.as_mut_ptr(),
                &mut rounds,
                &mut all,
            );
            assert_eq!(status, MajpercStatus::Ok);

            let s = engine::random_initial(256, p, seed).unwrap();
            let expect = engine::run_to_fixpoint(&core, Rule::majority(2), &s);
            for v in 0..256 {
                assert_eq!(init[v] != 0, s.is_active(v));
                assert_eq!(fin[v] != 0, expect.state.is_active(v));
            }
            assert_eq!((rounds, all), (expect.rounds, expect.disseminated));
        }

        let mut json = ptr::null_mut();
        assert_eq!(
            majperc_graph_matchings_json(g, &mut json),
            MajpercStatus::Ok
        );
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        majperc_string_free(json);
        let doc: matchings::MatchingDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc, core.matchings().to_document());
        majperc_graph_free(g);
    }
}

#[test]
fn neighbour_rule_and_theory_values() {
    unsafe {
        let g = lattice(8, 1);
        let mut init = [0u8; 64];
        init[0] = 1;
        let mut fin = vec![0u8; 64];
        let status = majperc_run(
            g,
            MajpercRuleKind::Neighbour,
            1,
            init.as_ptr(),
            64,
            fin.as_mut_ptr(),
            ptr::null_mut(),
            ptr::null_mut(),
        );
        assert_eq!(status, MajpercStatus::Ok);
        assert!(fin.iter().all(|&b| b == 1));
        assert_eq!(
            majperc_run(
                g,
                MajpercRuleKind::Neighbour,
                0,
                init.as_ptr(),
                64,
                fin.as_mut_ptr(),
                ptr::null_mut(),
                ptr::null_mut()
            ),
            MajpercStatus::InvalidArgument
        );
        majperc_graph_free(g);

        let mut p = 0.0;
        assert_eq!(majperc_critical_prob(7, &mut p), MajpercStatus::Ok);
        assert!((p - majperc::theory::critical_prob(7).unwrap().p_tilde).abs() < 1e-15);
        let x = majperc_wheel_pplus();
        assert!((x + x * x - x * x * x - 0.5).abs() < 1e-12);
    }
}

fn staticlib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("libmajperc_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_compiles_and_links_from_c() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header_dir = crate_dir.join("include");
    assert!(header_dir.join("majperc.h").exists());
    let Some(lib) = staticlib() else {
        panic!("static library not found next to the test binary");
    };
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("majperc_smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c11", "-Wall", "-Werror", "-I"])
        .arg(&header_dir)
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler runs");
    assert!(status.success(), "C smoke program failed to build");
    let run = Command::new(&out).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
