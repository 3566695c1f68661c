//! Output directory writer. Every file is written as soon as it is ready, so a
//! failing stage leaves the earlier artifacts in place.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use spectral_core::io::{save, FieldData};
use spectral_core::{Error, Result, SpectralScalarField, SpectralVectorField};

pub struct ArtifactWriter {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}

impl ArtifactWriter {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(ArtifactWriter { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        p
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
        text.push('\n');
        self.text(name, &text)
    }

    pub fn text(&mut self, name: &str, text: &str) -> Result<()> {
        let p = self.path(name);
        fs::write(p, text)?;
        Ok(())
    }

    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let p = self.path(name);
        let mut w = csv::Writer::from_path(p).map_err(csv_err)?;
        for row in rows {
            w.serialize(row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn scalar(&mut self, name: &str, field: &SpectralScalarField) -> Result<()> {
        let p = self.path(name);
        save(p, &FieldData::Scalar(field.clone()))
    }

    pub fn vector(&mut self, name: &str, field: &SpectralVectorField) -> Result<()> {
        let p = self.path(name);
        save(p, &FieldData::Vector(field.clone()))
    }
}
