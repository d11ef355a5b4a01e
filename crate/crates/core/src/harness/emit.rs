use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::report::Report;
use crate::error::{Error, Result};

/// Manifest in `sha256sum` format, so `sha256sum -c` verifies a directory.
pub const MANIFEST_NAME: &str = "MANIFEST.sha256";
/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RMTLAB_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
    Plot,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Csv, Format::Json, Format::Plot];

    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Plot => "plot",
        }
    }

    pub fn render(&self, report: &Report) -> Result<String> {
        Ok(match self {
            Format::Csv => report.to_csv(),
            Format::Json => report.to_json()?,
            Format::Plot => report.to_plot(),
        })
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "plot" => Ok(Format::Plot),
            _ => Err(Error::Config(format!("unknown format '{s}'; use csv, json or plot"))),
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read_manifest(path: &Path) -> Result<BTreeMap<String, String>> {
    let mut entries = BTreeMap::new();
    if !path.exists() {
        return Ok(entries);
    }
    for line in fs::read_to_string(path)?.lines() {
        if let Some((digest, name)) = line.split_once("  ") {
            entries.insert(name.to_string(), digest.to_string());
        }
    }
    Ok(entries)
}

/// Writes `<stem>.<ext>` for each format into `dir` and records their
/// digests in the directory manifest. Existing artifacts are only replaced
/// when `force` is set; nothing is written if any would be refused.
pub fn emit(report: &Report, formats: &[Format], dir: &Path, stem: &str, force: bool) -> Result<Vec<PathBuf>> {
    if formats.is_empty() {
        return Err(Error::Config("no output format selected".into()));
    }
    if stem.is_empty() || stem.contains(['/', '\\']) {
        return Err(Error::Config(format!("invalid artifact name '{stem}'")));
    }
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("cannot create {}: {e}", dir.display())))?;
    let mut formats = formats.to_vec();
    formats.sort();
    formats.dedup();
    let targets: Vec<(Format, PathBuf)> =
        formats.iter().map(|&f| (f, dir.join(format!("{stem}.{}", f.extension())))).collect();
    if !force {
        if let Some((_, p)) = targets.iter().find(|(_, p)| p.exists()) {
            return Err(Error::Io(format!("{} exists; pass --force to overwrite", p.display())));
        }
    }
    let manifest_path = dir.join(MANIFEST_NAME);
    let mut manifest = read_manifest(&manifest_path)?;
    let mut written = Vec::new();
    for (f, path) in targets {
        let body = f.render(report)?;
        fs::write(&path, &body).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
        let name = path.file_name().expect("joined file name").to_string_lossy().into_owned();
        manifest.insert(name, sha256_hex(body.as_bytes()));
        written.push(path);
    }
    let text: String = manifest.iter().map(|(name, digest)| format!("{digest}  {name}\n")).collect();
    fs::write(&manifest_path, text)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", manifest_path.display())))?;
    written.push(manifest_path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_experiment, ExperimentConfig, ExperimentKind};

    fn report() -> Report {
        run_experiment(ExperimentConfig::new(ExperimentKind::TwTable, 0, 0).with_param("grid", "-1:1:0.5")).unwrap()
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn writes_manifest_and_refuses_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        let r = report();
        let paths = emit(&r, &Format::ALL, dir.path(), "tw", false).unwrap();
        assert_eq!(paths.len(), 4);
        let manifest = read_manifest(&dir.path().join(MANIFEST_NAME)).unwrap();
        assert_eq!(manifest.len(), 3);
        let json = fs::read(dir.path().join("tw.json")).unwrap();
        assert_eq!(manifest["tw.json"], sha256_hex(&json));
        assert!(matches!(emit(&r, &[Format::Csv], dir.path(), "tw", false), Err(Error::Io(_))));
        emit(&r, &[Format::Csv], dir.path(), "tw", true).unwrap();
        // a second stem extends the manifest
        emit(&r, &[Format::Plot], dir.path(), "other", false).unwrap();
        assert_eq!(read_manifest(&dir.path().join(MANIFEST_NAME)).unwrap().len(), 4);
    }

    #[test]
    fn unwritable_directory_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain");
        fs::write(&file, "x").unwrap();
        assert!(matches!(emit(&report(), &[Format::Json], &file, "r", false), Err(Error::Io(_))));
    }

    #[test]
    fn format_names() {
        for f in Format::ALL {
            assert_eq!(f.to_string().parse::<Format>().unwrap(), f);
        }
        assert!("xml".parse::<Format>().is_err());
    }
}
