use std::path::Path;
use std::process::{Command, Output};

use jetsplit::{run_trajectory, JetPoint};
use jetsplit_lab::dho::{dho_diagnostics, dho_step};
use jetsplit_lab::output::{read_csv, write_trajectory_csv};
use jetsplit_lab::systems::dho_hamiltonian;

fn jetsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetsplit"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dho_csv_has_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = jetsplit(&[
        "dho",
        "--scheme",
        "strang2",
        "--T",
        "2",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let table = read_csv(&dir.path().join("dho_strang2.csv")).unwrap();
    assert_eq!(
        table.header,
        [
            "t",
            "x",
            "u",
            "p",
            "H",
            "sigma_cum",
            "H_rel_err",
            "lambda_err"
        ]
    );
    assert_eq!(table.rows.len(), 41);
    assert!(table.rows.iter().all(|r| r.len() == 8));
    assert_eq!(&table.rows[0][..4], &[0.0, 1.0, 0.0, 0.0]);
}

#[test]
fn trajectory_csv_round_trips() {
    let (step, _) = dho_step("yoshida3", 0.3).unwrap();
    let ham = dho_hamiltonian(0.3);
    let rec = run_trajectory(
        &*step,
        &JetPoint::scalar(1.0, 0.0, 0.0),
        0.0,
        0.1,
        3.0,
        &ham,
    )
    .unwrap();
    let reference = dho_diagnostics(&rec, 0.3);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("nested/run.csv");
    write_trajectory_csv(&file, &rec, Some(&reference)).unwrap();
    let table = read_csv(&file).unwrap();
    assert_eq!(table.rows.len(), rec.len());
    for (k, row) in table.rows.iter().enumerate() {
        let z = &rec.states[k];
        let want = [
            rec.times[k],
            z.x[0],
            z.u,
            z.p[0],
            rec.h_values[k],
            rec.sigma_cum[k],
            reference.h_rel_err[k],
            reference.lambda_err[k],
        ];
        assert_eq!(row.as_slice(), &want);
    }
}

#[test]
fn same_config_and_seed_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("dw.toml");
    std::fs::write(
        &config,
        "scenario = \"double_well\"\nscheme = \"gadget-d\"\nh = 0.01\nT = 1.0\nseed = 5\n[params]\nsigma = 0.5\n",
    )
    .unwrap();
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let out_dir = dir.path().join(run);
        let out = jetsplit(&[
            "double-well",
            "--config",
            path(&config),
            "--out",
            path(&out_dir),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let out = jetsplit(&[
            "bracket-check",
            "--gadget",
            "basic",
            "--seed",
            "9",
            "--out",
            path(&out_dir),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let mut names: Vec<_> = std::fs::read_dir(&out_dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        names.sort();
        files.push(names);
    }
    assert_eq!(files[0].len(), files[1].len());
    assert!(files[0].len() >= 6, "{:?}", files[0]);
    for (a, b) in files[0].iter().zip(&files[1]) {
        assert_eq!(a.file_name(), b.file_name());
        assert_eq!(
            std::fs::read(a).unwrap(),
            std::fs::read(b).unwrap(),
            "{}",
            a.display()
        );
    }
}

#[test]
fn svg_output_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let out = jetsplit(&[
        "dho",
        "--scheme",
        "lie1",
        "--T",
        "5",
        "--svg",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["dho_lie1_energy.svg", "dho_lie1_xp.svg"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(
            text.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""),
            "{name}"
        );
        assert!(text.trim_end().ends_with("</svg>"), "{name}");
        assert!(
            text.contains("class=\"x-axis\"") && text.contains("class=\"title\""),
            "{name}"
        );
        assert!(
            text.contains("class=\"series\"") && text.contains("<path d=\"M"),
            "{name}"
        );
        assert_eq!(
            text.matches("<g").count(),
            text.matches("</g>").count(),
            "{name}"
        );
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name);

    let ok = jetsplit(&["decompose", "x*p^2"]);
    assert_eq!(code(&ok), 0);
    assert!(String::from_utf8_lossy(&ok.stdout).contains("[s1, d1]"));

    // Strang CBABC stops at a singular step near t = 1.08.
    let partial = jetsplit(&["vdp", "--T", "2", "--out", path(&out("vdp"))]);
    assert_eq!(code(&partial), 1);
    assert!(out("vdp").join("vdp_strang_cbabc.csv").exists());

    assert_eq!(
        code(&jetsplit(&[
            "dho",
            "--scheme",
            "nonsense",
            "--out",
            path(&out("x"))
        ])),
        2
    );
    assert_eq!(
        code(&jetsplit(&["dho", "--h", "-1", "--out", path(&out("x"))])),
        2
    );
    let bad = out("bad.toml");
    std::fs::write(&bad, "scenario = \"dho\"\nh = \"fast\"\n").unwrap();
    assert_eq!(code(&jetsplit(&["dho", "--config", path(&bad)])), 2);
    assert_eq!(
        code(&jetsplit(&["dho", "--config", path(&out("missing.toml"))])),
        2
    );

    // The transport flow of `up` blows up at t = 1 from p = −1.
    let blow = out("blow.toml");
    std::fs::write(
        &blow,
        "scenario = \"vdp\"\nscheme = \"vdpC\"\nh = 2.0\nT = 4.0\nz0 = { x = 1.0, p = -1.0, u = 1.0 }\n",
    )
    .unwrap();
    let r = jetsplit(&["vdp", "--config", path(&blow), "--out", path(&out("blow"))]);
    assert_eq!(code(&r), 3);
    assert!(!out("blow").exists());
}
