//! File formats, loaders resolving cross-file references, and run reports.

mod format;
mod report;

pub use format::{
    parse_anomaly, parse_cgraph, parse_colors_text, parse_complex, parse_count_table, parse_count_table_with,
    parse_degenerate_table, parse_diagram_sum, parse_family, parse_propagator, write_anomaly, write_cgraph,
    write_complex, write_count_table, write_degenerate_table, write_diagram_sum, write_family, write_propagator,
    CountFile, FamilyManifest,
};
pub use report::{inputs_digest, RunReport};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::{ParseError, TraceError};
use crate::morse::{Propagator, TwistedComplex};
use crate::trace::Family;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Trace { path: String, source: TraceError },
}

pub fn read_file(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, LoadError> {
    r.map_err(|source| LoadError::Parse { path: path.display().to_string(), source })
}

fn relative(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(p)
    }
}

pub fn load_complex(path: &Path) -> Result<TwistedComplex, LoadError> {
    parsed(path, parse_complex(&read_file(path)?))
}

/// Reads a propagator file and checks its generators and the identity
/// `∂g + g∂ = 1` against `c`.
pub fn load_propagator(path: &Path, c: &TwistedComplex) -> Result<Propagator, LoadError> {
    let (gens, g) = parsed(path, parse_propagator(&read_file(path)?))?;
    if &gens != c.all_generators() {
        return Err(LoadError::Parse {
            path: path.display().to_string(),
            source: ParseError::at_line(1, "generators differ from the complex"),
        });
    }
    Propagator::new(c, g).map_err(|e| LoadError::Trace { path: path.display().to_string(), source: e.into() })
}

/// Loads every complex and propagator named by a family file; propagators
/// left out are computed.
pub fn load_family(path: &Path) -> Result<Family, LoadError> {
    let manifest = parsed(path, parse_family(&read_file(path)?))?;
    let mut complexes = Vec::new();
    let mut props = Vec::new();
    for (c, g) in &manifest.entries {
        let cp = relative(path, c);
        let cx = load_complex(&cp)?;
        props.push(match g {
            Some(g) => Some(load_propagator(&relative(path, g), &cx)?),
            None => None,
        });
        complexes.push(cx);
    }
    Family::new(complexes, props).map_err(|source| LoadError::Trace { path: path.display().to_string(), source })
}

/// Reads a count table, resolving graph references and returning the family
/// path relative to the current directory.
pub fn load_count_table(path: &Path) -> Result<(CountFile, Option<PathBuf>), LoadError> {
    let text = read_file(path)?;
    let load = |p: &str| {
        std::fs::read_to_string(relative(path, p))
            .map_err(|e| ParseError { location: p.to_string(), msg: e.to_string() })
    };
    let cf = parsed(path, parse_count_table_with(&text, &load))?;
    let fam = cf.family.as_ref().map(|f| relative(path, f));
    Ok((cf, fam))
}
