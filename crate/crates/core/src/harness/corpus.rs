//! Example programs with expected results.
//!
//! A corpus file holds one gradual program of type `F (1 + 1)`. Header
//! comments give the expected result, either for every interpretation
//! (`; expect: true`) or for one (`; expect scheme: error`).

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dyninterp::InterpKind;
use crate::machine::RunResult;
use crate::syntax::{parse_term, Tm};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    Bad { path: PathBuf, msg: String },
}

#[derive(Clone, Debug)]
pub struct CorpusProgram {
    pub name: String,
    pub source: String,
    pub term: Tm,
    expect: Vec<(Option<InterpKind>, RunResult)>,
}

impl CorpusProgram {
    /// Expected result under `kind`; interpretation-specific lines win.
    pub fn expected(&self, kind: InterpKind) -> Option<RunResult> {
        self.expect
            .iter()
            .find(|(k, _)| *k == Some(kind))
            .or_else(|| self.expect.iter().find(|(k, _)| k.is_none()))
            .map(|(_, r)| *r)
    }
}

pub fn parse_result(s: &str) -> Option<RunResult> {
    match s {
        "true" => Some(RunResult::True),
        "false" => Some(RunResult::False),
        "error" => Some(RunResult::Error),
        "timeout" => Some(RunResult::Timeout),
        _ => None,
    }
}

pub fn parse_program(name: &str, source: &str) -> Result<CorpusProgram, String> {
    let mut expect = Vec::new();
    for line in source.lines() {
        let Some(rest) = line.trim().strip_prefix(';') else { continue };
        let Some((key, val)) = rest.split_once(':') else { continue };
        let mut words = key.split_whitespace();
        if words.next() != Some("expect") {
            continue;
        }
        let kind = match words.next() {
            None => None,
            Some(k) => Some(k.parse::<InterpKind>().map_err(|_| format!("unknown interpretation '{k}'"))?),
        };
        let r = parse_result(val.trim()).ok_or_else(|| format!("unknown result '{}'", val.trim()))?;
        expect.push((kind, r));
    }
    let term = parse_term(source).map_err(|e| e.to_string())?.term;
    Ok(CorpusProgram { name: name.to_string(), source: source.to_string(), term, expect })
}

/// Every `.gtt` file in `dir`, sorted by name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusProgram>, CorpusError> {
    let io = |e| CorpusError::Io { path: dir.to_path_buf(), source: e };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gtt"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let source =
                std::fs::read_to_string(&path).map_err(|e| CorpusError::Io { path: path.clone(), source: e })?;
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            parse_program(&name, &source).map_err(|msg| CorpusError::Bad { path, msg })
        })
        .collect()
}

/// The corpus shipped with this crate.
pub fn default_corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectations_by_interp() {
        let p = parse_program("t", "; expect: true\n; expect scheme: error\n(ret (inl (+ 1 1) unit))").unwrap();
        assert_eq!(p.expected(InterpKind::Natural), Some(RunResult::True));
        assert_eq!(p.expected(InterpKind::Scheme), Some(RunResult::Error));
    }

    #[test]
    fn bad_expectation() {
        assert!(parse_program("t", "; expect: maybe\n(ret unit)").is_err());
    }
}
