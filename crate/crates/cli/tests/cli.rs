use std::fs;
use std::path::Path;

use sorani_sbd_cli::{run, BUNDLED_CORPUS, EXIT_DATA, EXIT_IO, EXIT_OK, EXIT_USAGE};

fn sbd(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sbd").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(path: &Path, text: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

#[test]
fn split_train_segment_eval() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = Path::new(BUNDLED_CORPUS).join("text");
    let split = tmp.path().join("split");
    let (code, _, err) = sbd(&["split", "--in", p(&corpus), "--out", p(&split), "--ratio", "0.9"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let dev = fs::read_to_string(split.join("dev/math/grade7.txt")).unwrap();
    let test = fs::read_to_string(split.join("test/math/grade7.txt")).unwrap();
    assert_eq!(dev.lines().count(), 18);
    assert_eq!(test.lines().count(), 2);

    let model = tmp.path().join("model.txt");
    let (code, _, err) = sbd(&["train", "--in", p(&split.join("dev")), "--model", p(&model)]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(fs::read_to_string(&model).unwrap().starts_with("PUNKTPARAMS v1\n"));

    let abbrevs = tmp.path().join("abbrevs.txt");
    write(&abbrevs, "# forced\nد.\nپ.\nد.خ.\nم.\nپ‌.‌ز.\n");
    let pred = tmp.path().join("pred");
    let (code, _, err) = sbd(&[
        "segment",
        "--in",
        p(&split.join("test")),
        "--model",
        p(&model),
        "--abbrev",
        p(&abbrevs),
        "--out",
        p(&pred),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let xml = fs::read_to_string(pred.join("math/grade7.xml")).unwrap();
    assert!(xml.contains("<s>د. کامەران وانەکەی ڕوونکردەوە.</s>"), "{xml}");
    assert!(!xml.contains('\r'));

    // Gold restricted to the test lines.
    let gold = tmp.path().join("gold");
    for entry in fs::read_dir(pred.join("math")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap();
        fs::create_dir_all(gold.join("math")).unwrap();
        fs::copy(&path, gold.join("math").join(name)).unwrap();
    }
    fs::remove_dir_all(pred.join("history")).unwrap();
    fs::remove_dir_all(pred.join("kurdish")).unwrap();
    fs::remove_dir_all(pred.join("science")).unwrap();
    let (code, out, err) = sbd(&["eval", "--pred", p(&pred), "--gold", p(&gold)]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("precision=100.00%"), "{out}");
    assert!(out.contains("fp=0\n"));
}

#[test]
fn eval_annotated_fixture() {
    let tmp = tempfile::tempdir().unwrap();
    let mut body = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<doc id=\"a\">\n");
    for i in 0..41 {
        body.push_str(&format!("<s type=\"tp\">ڕستە {i}.</s>\n"));
    }
    body.push_str("</doc>\n");
    write(&tmp.path().join("a.xml"), &body);
    let mut fps = String::from("<doc id=\"b\">\n");
    for _ in 0..8 {
        fps.push_str("<s type=\"fp\">د.</s>\n");
    }
    fps.push_str("</doc>\n");
    write(&tmp.path().join("sub/b.xml"), &fps);

    let (code, out, _) = sbd(&["eval", "--annotated", p(tmp.path())]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("tp=41\ntn=0\nfp=8\nfn=0\n"), "{out}");
    assert!(out.contains("f1=91.11%\n"));
    assert!(out.contains("error_rate=16.33%\n"));
}

#[test]
fn segment_empty_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    fs::create_dir(&input).unwrap();
    let model = tmp.path().join("m.txt");
    write(&model, "PUNKTPARAMS v1\n");
    let out = tmp.path().join("out");
    let (code, _, err) = sbd(&["segment", "--in", p(&input), "--model", p(&model), "--out", p(&out)]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(fs::read_dir(&out).unwrap().count(), 0);
}

#[test]
fn segment_respects_enders_and_ellipsis_flags() {
    let tmp = tempfile::tempdir().unwrap();
    write(&tmp.path().join("in/a.txt"), "ئەو هات... باشە! ڕۆیشت\n");
    let model = tmp.path().join("m.txt");
    write(&model, "PUNKTPARAMS v1\n");
    let out = tmp.path().join("out");
    let input = tmp.path().join("in");
    let base = ["segment", "--in", p(&input), "--model", p(&model), "--out", p(&out)];

    assert_eq!(sbd(&base).0, EXIT_OK);
    let xml = fs::read_to_string(out.join("a.xml")).unwrap();
    assert_eq!(xml.matches("<s>").count(), 2, "{xml}");

    let mut args = base.to_vec();
    args.extend(["--ellipsis-breaks", "--enders", "?؟"]);
    assert_eq!(sbd(&args).0, EXIT_OK);
    let xml = fs::read_to_string(out.join("a.xml")).unwrap();
    assert!(xml.contains("<s>ئەو هات...</s>\n<s>باشە! ڕۆیشت</s>"), "{xml}");
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("missing");

    let (code, _, err) = sbd(&["train", "--bogus"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(err.lines().count(), 1, "{err}");

    let (code, _, err) = sbd(&["train", "--in", p(&missing), "--model", p(&tmp.path().join("m"))]);
    assert_eq!(code, EXIT_IO);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("missing"));

    let (code, _, _) = sbd(&[
        "split",
        "--in",
        BUNDLED_CORPUS,
        "--out",
        p(&tmp.path().join("o")),
        "--ratio",
        "1.5",
    ]);
    assert_eq!(code, EXIT_USAGE);

    write(&tmp.path().join("in/a.txt"), "سڵاو\n");
    let bad_model = tmp.path().join("bad.txt");
    write(&bad_model, "PUNKTPARAMS v9\n");
    let (input, out) = (tmp.path().join("in"), tmp.path().join("o"));
    let args = ["segment", "--in", p(&input), "--model", p(&bad_model), "--out", p(&out)];
    let (code, _, err) = sbd(&args);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("bad.txt"), "{err}");

    write(&tmp.path().join("x/a.xml"), "<doc><s>unclosed</doc>");
    let (code, _, err) = sbd(&["eval", "--annotated", p(&tmp.path().join("x"))]);
    assert_eq!(code, EXIT_DATA);
    assert_eq!(err.lines().count(), 1, "{err}");

    assert_eq!(sbd(&["eval"]).0, EXIT_USAGE);
    assert_eq!(sbd(&["--help"]).0, EXIT_OK);
}

#[test]
fn reproduce_bundled_and_inputs_untouched() {
    let tmp = tempfile::tempdir().unwrap();
    let before = fs::read(Path::new(BUNDLED_CORPUS).join("text/math/grade7.txt")).unwrap();
    let out = tmp.path().join("r");
    let (code, stdout, err) = sbd(&["reproduce", "--out", p(&out)]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(stdout.contains("[without_abbreviations]") && stdout.contains("[with_abbreviations]"));
    assert_eq!(fs::read_to_string(out.join("report.txt")).unwrap(), stdout);
    assert!(out.join("with_abbrevs/math/grade7.xml").is_file());
    assert_eq!(
        fs::read(Path::new(BUNDLED_CORPUS).join("text/math/grade7.txt")).unwrap(),
        before
    );

    let corpus = Path::new(BUNDLED_CORPUS).join("text");
    let (code, stdout, _) = sbd(&["reproduce", "--corpus", p(&corpus)]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("metrics not computed"));
}
