//! Loading models, deltas and products from disk.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use deltablocks::check::Location;
use deltablocks::dsl::{
    parse_deltas, parse_library_indexed, parse_products, ParseError, ProductConfiguration, SourceIndex,
};
use deltablocks::scheduler::DeltaLibrary;
use deltablocks::ModelLibrary;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: model `{name}` is already defined in {}", path.display(), first.display())]
    DuplicateModel { path: PathBuf, name: String, first: PathBuf },
    #[error("{}: delta `{name}` is already defined in {}", path.display(), first.display())]
    DuplicateDelta { path: PathBuf, name: String, first: PathBuf },
}

/// Everything a command works on, parsed up front.
#[derive(Debug)]
pub struct Workspace {
    pub model_paths: Vec<PathBuf>,
    pub delta_paths: Vec<PathBuf>,
    pub product_path: PathBuf,
    pub core: ModelLibrary,
    pub deltas: DeltaLibrary,
    pub products: Vec<ProductConfiguration>,
    /// Per model file: its models and their source positions.
    sources: Vec<(PathBuf, ModelLibrary, SourceIndex)>,
    delta_files: Vec<(String, PathBuf)>,
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })
}

/// Files in `dir` with extension `ext`, sorted by path.
fn list(dir: &Path, ext: &str) -> Result<Vec<PathBuf>, LoadError> {
    let io_err = |source| LoadError::Io { path: dir.to_path_buf(), source };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == ext) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

impl Workspace {
    /// Loads `*.dbm` from `models`, `*.dbd` from `deltas`, and the product
    /// file. Files are read in path order, so library order follows it.
    pub fn load(models: &Path, deltas: &Path, products: &Path) -> Result<Self, LoadError> {
        let model_paths = list(models, "dbm")?;
        let delta_paths = list(deltas, "dbd")?;

        let mut core = ModelLibrary::new();
        let mut sources: Vec<(PathBuf, ModelLibrary, SourceIndex)> = Vec::new();
        for path in &model_paths {
            let (lib, index) = parse_library_indexed(&read(path)?)
                .map_err(|source| LoadError::Parse { path: path.clone(), source })?;
            for model in lib.models() {
                if let Some((first, _, _)) = sources.iter().find(|(_, l, _)| l.contains(&model.name)) {
                    return Err(LoadError::DuplicateModel {
                        path: path.clone(),
                        name: model.name.clone(),
                        first: first.clone(),
                    });
                }
            }
            core.merge(lib.clone()).expect("duplicates checked above");
            sources.push((path.clone(), lib, index));
        }

        let mut library = DeltaLibrary::new();
        let mut delta_files: Vec<(String, PathBuf)> = Vec::new();
        for path in &delta_paths {
            let parsed =
                parse_deltas(&read(path)?).map_err(|source| LoadError::Parse { path: path.clone(), source })?;
            for delta in parsed {
                if let Some((_, first)) = delta_files.iter().find(|(n, _)| *n == delta.name) {
                    return Err(LoadError::DuplicateDelta {
                        path: path.clone(),
                        name: delta.name,
                        first: first.clone(),
                    });
                }
                delta_files.push((delta.name.clone(), path.clone()));
                library.insert(delta).expect("duplicates checked above");
            }
        }

        let product_list = parse_products(&read(products)?)
            .map_err(|source| LoadError::Parse { path: products.to_path_buf(), source })?;

        Ok(Workspace {
            model_paths,
            delta_paths,
            product_path: products.to_path_buf(),
            core,
            deltas: library,
            products: product_list,
            sources,
            delta_files,
        })
    }

    pub fn product(&self, name: &str) -> Option<&ProductConfiguration> {
        self.products.iter().find(|p| p.name == name)
    }

    /// `file:line:col` of a location in the core library, if known.
    pub fn locate(&self, loc: &Location) -> Option<String> {
        let (path, _, index) = self.sources.iter().find(|(_, lib, _)| lib.contains(&loc.model))?;
        let pos = index.position_of(loc)?;
        Some(format!("{}:{pos}", path.display()))
    }

    /// File a delta was loaded from.
    pub fn delta_file(&self, name: &str) -> Option<&Path> {
        self.delta_files.iter().find(|(n, _)| n == name).map(|(_, p)| p.as_path())
    }
}
