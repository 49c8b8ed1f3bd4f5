//! Files, output and exit codes.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

use misere::monoid::{build_from_presentation, parse_presentation, BipartiteMonoid, MonoidJson};

use crate::Format;

pub const EXIT_NO: u8 = 1;
pub const EXIT_PARTIAL: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_IO: u8 = 74;

/// Presentations larger than this are rejected rather than completed.
const PRESENTATION_CAP: usize = 64;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(msg: impl Display) -> Self {
        Failure { code: EXIT_USAGE, message: msg.to_string() }
    }

    pub fn data(path: &Path, msg: impl Display) -> Self {
        Failure { code: EXIT_DATA, message: format!("{}: {msg}", path.display()) }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }
}

pub struct Output {
    pub format: Format,
}

impl Output {
    pub fn emit(&self, text: &str, doc: &Value) {
        match self.format {
            Format::Text => print!("{text}"),
            Format::Json => println!("{}", serde_json::to_string_pretty(doc).expect("json value")),
        }
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

/// A monoid file holds either monoid JSON or a presentation.
pub fn load_monoid(path: &Path) -> Result<BipartiteMonoid, Failure> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        return MonoidJson::parse(&text).map_err(|e| Failure::data(path, e));
    }
    let p = parse_presentation(&text).map_err(|e| Failure::data(path, e))?;
    build_from_presentation(&p, PRESENTATION_CAP).map_err(|e| Failure::data(path, e))
}

/// Fails early when the output directory does not exist.
pub fn check_out_path(path: &Path) -> Result<(), Failure> {
    match path.parent() {
        Some(d) if !d.as_os_str().is_empty() && !d.is_dir() => Err(Failure::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "directory does not exist"),
        )),
        _ => Ok(()),
    }
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see half a document.
pub fn write_json(path: &Path, doc: &Value) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    let body = serde_json::to_string_pretty(doc).expect("json value");
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(tmp)?;
        f.write_all(body.as_bytes())?;
        f.write_all(b"\n")?;
        f.sync_all()?;
        fs::rename(tmp, path)
    };
    write().map_err(|e| Failure::io(path, e))
}
