use std::path::Path;
use std::process::Command;

fn run(exe: &str, args: &[&str]) -> std::process::Output {
    let out = Command::new(exe).args(args).output().unwrap();
    assert!(out.status.success(), "{exe} {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

#[test]
fn tracesim_and_attackeval_chain() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let ts = env!("CARGO_BIN_EXE_tracesim");
    run(ts, &["synth", "--profile", "bulb", "--duration", "900", "--seed", "1", "--out", &p("bulb.jsonl")]);
    run(ts, &["synth", "--profile", "plug", "--duration", "900", "--seed", "2", "--out", &p("plug.csv")]);
    run(ts, &["obfuscate", "--in", &p("bulb.jsonl"), "--seed", "3", "--out", &p("bulb-seg.jsonl")]);
    run(ts, &["pad", "--in", &p("plug.csv"), "--out", &p("plug-pad.jsonl")]);
    run(ts, &["cover", "--target", &p("bulb.jsonl"), "--reference", &p("plug.csv"), "--out", &p("bulb-cover.jsonl")]);
    for f in ["bulb-seg.jsonl", "plug-pad.jsonl", "bulb-cover.jsonl"] {
        assert!(Path::new(&p(f)).is_file());
    }
    let out = run(
        env!("CARGO_BIN_EXE_attackeval"),
        &["run", "--traces", &p("bulb.jsonl"), &p("plug.csv"), "--trees", "20", "--out", &p("metrics.json")],
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("accuracy"));
    let metrics: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p("metrics.json")).unwrap()).unwrap();
    assert!(metrics["accuracy"].as_f64().unwrap() > 0.9);
}

#[test]
fn shaper_send_and_recv() {
    let dir = tempfile::tempdir().unwrap();
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let recv_out = dir.path().join("recv.json");
    let mut recv = Command::new(env!("CARGO_BIN_EXE_shaper"))
        .args(["recv", "--bind", "127.0.0.1", "--port", &port.to_string(), "--conns", "2", "--timeout", "30", "--out"])
        .arg(&recv_out)
        .spawn()
        .unwrap();
    let send_out = dir.path().join("send.json");
    let addr = format!("127.0.0.1:{port}");
    let mut sent = None;
    // The receiver may not be listening yet.
    for _ in 0..50 {
        let out = Command::new(env!("CARGO_BIN_EXE_shaper"))
            .args(["send", "--addr", &addr, "--size", "100000", "--profile", "rand-high", "--reps", "2", "--out"])
            .arg(&send_out)
            .output()
            .unwrap();
        if out.status.success() {
            sent = Some(out);
            break;
        }
        std::thread::sleep(std::time::Duration::from_millis(100));
    }
    assert!(sent.is_some(), "sender never connected");
    assert!(recv.wait().unwrap().success());
    let parse = |p: &Path| -> serde_json::Value { serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap() };
    let (s, r) = (parse(&send_out), parse(&recv_out));
    for i in 0..2 {
        assert_eq!(s[i]["checksum"], r[i]["checksum"]);
        assert_eq!(r[i]["bytes_sent"], 100000);
    }
}

#[test]
fn bad_profile_fails_cleanly() {
    let out = Command::new(env!("CARGO_BIN_EXE_tracesim"))
        .args(["synth", "--profile", "no-such-device"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
