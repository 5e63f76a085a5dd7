use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use ttlab::formulas::ReductionClass;
use ttlab::TTReduction;

/// Inline JSON if the argument looks like JSON, otherwise a file path.
pub fn json_arg<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') || trimmed.starts_with('"') {
        return serde_json::from_str(arg).with_context(|| format!("invalid JSON {arg:?}"));
    }
    let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {arg}"))
}

/// A reduction from a JSON file or a `row,formula` CSV table.
pub fn load_reduction(path: &str, class: Option<ReductionClass>) -> Result<TTReduction> {
    if path.ends_with(".csv") {
        let Some(class) = class else {
            bail!("--class is required for CSV reductions");
        };
        let file = fs::File::open(path).with_context(|| format!("opening {path}"))?;
        Ok(TTReduction::from_csv(file, class).with_context(|| format!("reading {path}"))?)
    } else {
        let mut r: TTReduction = json_arg(path)?;
        if let Some(c) = class {
            r.declared_class = c;
        }
        Ok(r)
    }
}

pub struct OutDir(PathBuf);

impl OutDir {
    pub fn create(path: &Path) -> Result<Self> {
        fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))?;
        Ok(OutDir(path.to_path_buf()))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.text(name, &text)
    }

    pub fn text(&self, name: &str, text: &str) -> Result<PathBuf> {
        let p = self.path(name);
        fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
        Ok(p)
    }

    pub fn csv(&self, name: &str) -> Result<csv::Writer<fs::File>> {
        let p = self.path(name);
        csv::Writer::from_path(&p).with_context(|| format!("writing {}", p.display()))
    }
}

pub fn parse_range(text: &str) -> Result<std::ops::Range<u64>> {
    let Some((a, b)) = text.split_once("..") else {
        bail!("expected a range like 0..100, got {text:?}");
    };
    let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {text:?}");
    }
    Ok(a..b)
}
