//! File emission: generated instance sets and experiment outputs.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use fairdiv_core::generate::{generate, GeneratorConfig};

/// I/O or domain failure, carrying an exit code for the binary.
#[derive(Debug)]
pub enum CliError {
    Core(fairdiv_core::Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<fairdiv_core::Error> for CliError {
    fn from(e: fairdiv_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 2 = usage, 3 = capacity, 4 = I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(fairdiv_core::Error::Capacity { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn write_text(path: &Path, content: &str) -> CliResult<()> {
    fs::write(path, content).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `inst_0000.txt`, `inst_0001.txt`, ... plus a `manifest.txt`
/// recording the configuration. Re-running with the same flags produces
/// byte-identical files.
pub fn write_instance_set(config: &GeneratorConfig, out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    let instances = generate(config)?;
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut paths = Vec::with_capacity(instances.len());
    for (idx, instance) in instances.iter().enumerate() {
        let path = out_dir.join(format!("inst_{idx:04}.txt"));
        write_text(&path, &instance.to_text())?;
        paths.push(path);
    }
    let manifest = format!(
        "model={}\nagents={}\nobjects={}\ncount={}\nseed={}\nweight_cap={}\n",
        config.model.label(),
        config.agents,
        config.objects,
        config.count,
        config.seed,
        config.weight_cap
    );
    write_text(&out_dir.join("manifest.txt"), &manifest)?;
    Ok(paths)
}

/// `results.csv` -> `results-summary.csv` (the per-instance CSV keeps the
/// given path).
pub fn summary_path(csv_path: &Path) -> PathBuf {
    let stem = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "summary".into());
    let name = match csv_path.extension() {
        Some(ext) => format!("{stem}-summary.{}", ext.to_string_lossy()),
        None => format!("{stem}-summary"),
    };
    match csv_path.parent() {
        Some(parent) => parent.join(name),
        None => PathBuf::from(name),
    }
}

pub fn read_instance(path: &Path) -> CliResult<fairdiv_core::Instance> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(fairdiv_core::Instance::from_text(&text)?)
}
