//! `sbd` command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;
use sorani_sbd::corpus::load_corpus;
use sorani_sbd::params::parse_abbrev_list;
use sorani_sbd::pipeline::{load_annotated, load_gold, reproduce, ReproduceConfig};
use sorani_sbd::{
    boundary_confusion, confusion_from_annotations, emit_xml, forced_abbrev_list_default, load_params, save_params,
    split_corpus, ConfusionCounts, Error, ErrorClass, Report, SegmentedDocument, Segmenter, SegmenterConfig, Tokenizer,
    TrainerConfig,
};

/// Synthetic corpus shipped with the crate, used by `reproduce` by default.
pub const BUNDLED_CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/synthetic");

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sbd",
    version,
    about = "Unsupervised sentence boundary detection for Sorani Kurdish"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a corpus into dev and test trees, line-wise per document.
    Split {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        ratio: f64,
    },
    /// Learn a model from a directory of text files.
    Train {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        thresholds: Thresholds,
    },
    /// Segment every text file under a directory into sentence XML.
    Segment {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Forced abbreviations, one per line.
        #[arg(long, value_name = "FILE")]
        abbrev: Option<PathBuf>,
        #[command(flatten)]
        segmenting: Segmenting,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Score predicted XML against gold XML, or count annotated judgments.
    Eval {
        #[arg(long, value_name = "DIR", requires = "gold", conflicts_with = "annotated")]
        pred: Option<PathBuf>,
        #[arg(long, value_name = "DIR", requires = "pred")]
        gold: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        annotated: Option<PathBuf>,
    },
    /// Split, train and segment with and without the default forced
    /// abbreviations, then compare.
    Reproduce {
        /// Root of the text files. Defaults to the bundled synthetic corpus.
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
        /// Gold sentence XML mirroring the corpus paths.
        #[arg(long, value_name = "DIR")]
        gold: Option<PathBuf>,
        /// Also write the model, both segmentations and the report here.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.9)]
        ratio: f64,
        #[command(flatten)]
        thresholds: Thresholds,
        #[command(flatten)]
        segmenting: Segmenting,
    },
}

#[derive(Debug, Args)]
struct Thresholds {
    #[arg(long, default_value_t = 0.3)]
    abbrev_threshold: f64,
    #[arg(long, default_value_t = 7.88)]
    colloc_threshold: f64,
    #[arg(long, default_value_t = 30.0)]
    starter_threshold: f64,
}

impl Thresholds {
    fn config(&self) -> TrainerConfig {
        TrainerConfig {
            abbrev_threshold: self.abbrev_threshold,
            colloc_threshold: self.colloc_threshold,
            starter_threshold: self.starter_threshold,
        }
    }
}

#[derive(Debug, Args)]
struct Segmenting {
    /// Let an ellipsis end a sentence.
    #[arg(long)]
    ellipsis_breaks: bool,
    /// Characters that always end a sentence, e.g. "?!؟".
    #[arg(long, value_name = "CHARS")]
    enders: Option<String>,
}

impl Segmenting {
    fn tokenizer(&self) -> Tokenizer {
        match &self.enders {
            Some(chars) => Tokenizer::with_enders(chars.chars()),
            None => Tokenizer::default(),
        }
    }

    fn config(&self) -> SegmenterConfig {
        SegmenterConfig {
            ellipsis_breaks: self.ellipsis_breaks,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(e) => match e.class() {
                ErrorClass::Usage => EXIT_USAGE,
                ErrorClass::Io => EXIT_IO,
                ErrorClass::DataFormat => EXIT_DATA,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string().replace('\n', " "),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs one invocation and returns the process exit status. Diagnostics go
/// to `stderr` as a single line.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let rendered = e.render().to_string();
            let line = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            let line = line.strip_prefix("error: ").unwrap_or(line);
            let _ = writeln!(stderr, "sbd: {line}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "sbd: {}", f.message());
            f.exit_code()
        }
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("SBD_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Split { input, out, ratio } => split(&input, &out, ratio),
        Command::Train {
            input,
            model,
            thresholds,
        } => train(&input, &model, &thresholds.config()),
        Command::Segment {
            input,
            model,
            abbrev,
            segmenting,
            out,
        } => segment(&input, &model, abbrev.as_deref(), &segmenting, &out),
        Command::Eval { pred, gold, annotated } => {
            let report = match (pred, gold, annotated) {
                (Some(p), Some(g), None) => eval_pred_gold(&p, &g)?,
                (None, None, Some(a)) => eval_annotated(&a)?,
                _ => {
                    return Err(Failure::Usage(
                        "eval needs either --pred and --gold, or --annotated".into(),
                    ))
                }
            };
            write_stdout(stdout, &report.to_string())
        }
        Command::Reproduce {
            corpus,
            gold,
            out,
            ratio,
            thresholds,
            segmenting,
        } => {
            let text = cmd_reproduce(corpus, gold, out.as_deref(), ratio, &thresholds, &segmenting)?;
            write_stdout(stdout, &text)
        }
    }
}

fn write_stdout(stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        })
        .map_err(Failure::from)
}

fn require_dir(path: &Path) -> CliResult<()> {
    match fs::metadata(path) {
        Ok(m) if m.is_dir() => Ok(()),
        Ok(_) => Err(io_failure(path, io::Error::other("not a directory"))),
        Err(e) => Err(io_failure(path, e)),
    }
}

fn require_file(path: &Path) -> CliResult<()> {
    match fs::metadata(path) {
        Ok(m) if m.is_file() => Ok(()),
        Ok(_) => Err(io_failure(path, io::Error::other("not a regular file"))),
        Err(e) => Err(io_failure(path, e)),
    }
}

fn io_failure(path: &Path, source: io::Error) -> Failure {
    Failure::Core(Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| io_failure(path, e))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_owned(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| io_failure(&dir, e))?;
    tmp.write_all(bytes).map_err(|e| io_failure(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| io_failure(path, e))?;
    tmp.persist(path).map_err(|e| io_failure(path, e.error))?;
    Ok(())
}

fn output_path(root: &Path, id: &str, extension: &str) -> PathBuf {
    let mut p = root.to_owned();
    for part in id.split('/') {
        p.push(part);
    }
    p.set_extension(extension);
    p
}

fn split(input: &Path, out: &Path, ratio: f64) -> CliResult<()> {
    require_dir(input)?;
    let docs = load_corpus(input)?;
    let split = split_corpus(&docs, ratio)?;
    for (half, docs) in [("dev", &split.dev), ("test", &split.test)] {
        let root = out.join(half);
        fs::create_dir_all(&root).map_err(|e| io_failure(&root, e))?;
        for doc in docs {
            write_atomic(&output_path(&root, doc.base_id(), "txt"), doc.text.as_bytes())?;
        }
    }
    info!(
        "split {} documents into {} dev and {} test",
        docs.len(),
        split.dev.len(),
        split.test.len()
    );
    Ok(())
}

fn train(input: &Path, model: &Path, config: &TrainerConfig) -> CliResult<()> {
    require_dir(input)?;
    let docs = load_corpus(input)?;
    let params = sorani_sbd::trainer::train_documents(&docs, &Tokenizer::default(), config)?;
    info!(
        "learned {} abbreviations, {} collocations, {} sentence starters",
        params.abbrev_types.len(),
        params.collocations.len(),
        params.sentence_starters.len()
    );
    write_atomic(model, &save_params(&params))
}

fn segment(input: &Path, model: &Path, abbrev: Option<&Path>, opts: &Segmenting, out: &Path) -> CliResult<()> {
    require_dir(input)?;
    require_file(model)?;
    if let Some(a) = abbrev {
        require_file(a)?;
    }
    let mut params = load_params(&read(model)?).map_err(|e| e.in_file(model))?;
    if let Some(a) = abbrev {
        let bytes = read(a)?;
        let text = sorani_sbd::corpus::decode_source(a, &bytes)?;
        params = params.with_forced(parse_abbrev_list(&text));
    }
    let docs = load_corpus(input)?;
    fs::create_dir_all(out).map_err(|e| io_failure(out, e))?;
    let segmenter = Segmenter::new(&params)
        .with_tokenizer(opts.tokenizer())
        .with_config(opts.config());
    for doc in &docs {
        let seg = segmenter.segment(doc);
        let path = output_path(out, &doc.id, "xml");
        write_atomic(&path, &emit_xml(&seg, None).map_err(|e| e.in_file(&path))?)?;
    }
    info!("segmented {} documents", docs.len());
    Ok(())
}

fn eval_pred_gold(pred: &Path, gold: &Path) -> CliResult<Report> {
    require_dir(pred)?;
    require_dir(gold)?;
    let pred = load_gold(pred)?;
    let gold = load_gold(gold)?;
    let tokenizer = Tokenizer::default();
    let mut total = ConfusionCounts::default();
    for (id, gold_sentences) in &gold {
        let Some(pred_sentences) = pred.get(id) else {
            return Err(Error::NotComparable(format!("{id}: no predicted segmentation")).into());
        };
        let p = SegmentedDocument::from_sentence_texts(id.as_str(), pred_sentences, &tokenizer);
        let g = SegmentedDocument::from_sentence_texts(id.as_str(), gold_sentences, &tokenizer);
        total += boundary_confusion(&p, &g)?;
    }
    if let Some(id) = pred.keys().find(|id| !gold.contains_key(*id)) {
        return Err(Error::NotComparable(format!("{id}: no gold segmentation")).into());
    }
    Ok(Report::new(total)?)
}

fn eval_annotated(dir: &Path) -> CliResult<Report> {
    require_dir(dir)?;
    let mut total = ConfusionCounts::default();
    for (id, doc) in load_annotated(dir)? {
        total += confusion_from_annotations(&doc.sentences).map_err(|e| e.in_file(&id))?;
    }
    Ok(Report::new(total)?)
}

fn cmd_reproduce(
    corpus: Option<PathBuf>,
    gold: Option<PathBuf>,
    out: Option<&Path>,
    ratio: f64,
    thresholds: &Thresholds,
    segmenting: &Segmenting,
) -> CliResult<String> {
    let (text_root, gold_root) = match corpus {
        Some(c) => (c, gold),
        None => {
            let bundled = Path::new(BUNDLED_CORPUS);
            (bundled.join("text"), gold.or_else(|| Some(bundled.join("gold"))))
        }
    };
    require_dir(&text_root)?;
    if let Some(g) = &gold_root {
        require_dir(g)?;
    }
    let docs = load_corpus(&text_root)?;
    let gold = gold_root.as_deref().map(load_gold).transpose()?;
    let config = ReproduceConfig {
        ratio,
        trainer: thresholds.config(),
        segmenter: segmenting.config(),
        tokenizer: segmenting.tokenizer(),
        forced: forced_abbrev_list_default(),
    };
    let result = reproduce(&docs, gold.as_ref(), &config)?;
    let report = result.report()?;
    if let Some(out) = out {
        write_atomic(&out.join("model.txt"), &save_params(&result.trained))?;
        for (name, run) in [
            ("without_abbrevs", &result.without_abbrevs),
            ("with_abbrevs", &result.with_abbrevs),
        ] {
            let root = out.join(name);
            fs::create_dir_all(&root).map_err(|e| io_failure(&root, e))?;
            for doc in &run.documents {
                let id = sorani_sbd::corpus::base_id(&doc.id);
                write_atomic(&output_path(&root, id, "xml"), &emit_xml(doc, None)?)?;
            }
        }
        write_atomic(&out.join("report.txt"), report.as_bytes())?;
    }
    Ok(report)
}
