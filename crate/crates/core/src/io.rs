//! JSON file format for POVMs.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bloch::BlochVector;
use crate::catalog::{make_hs_povm, Family, HsPovm};
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// On-disk POVM. A named family is rebuilt canonically; otherwise the
/// vectors define a custom POVM.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovmFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    pub vectors: Vec<BlochVector>,
}

impl PovmFile {
    pub fn from_povm(povm: &HsPovm) -> Self {
        let family = (povm.family() != Family::Custom).then(|| povm.family());
        PovmFile { schema_version: SCHEMA_VERSION, family, vectors: povm.vectors().to_vec() }
    }

    pub fn into_povm(self) -> Result<HsPovm> {
        match self.family {
            Some(f) if f != Family::Custom => make_hs_povm(f),
            _ => HsPovm::custom(self.vectors),
        }
    }
}

pub fn read_povm(path: &Path) -> Result<HsPovm> {
    let text = fs::read_to_string(path)?;
    let file: PovmFile = serde_json::from_str(&text)?;
    file.into_povm()
}

pub fn write_povm(path: &Path, povm: &HsPovm) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&PovmFile::from_povm(povm))?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = std::env::temp_dir().join(format!("povm-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cube.json");
        let cube = make_hs_povm(Family::Cube).unwrap();
        write_povm(&path, &cube).unwrap();
        let back = read_povm(&path).unwrap();
        assert_eq!(back.family(), Family::Cube);
        assert_eq!(back.vectors(), cube.vectors());
        let custom: PovmFile =
            serde_json::from_str(r#"{"schema_version":1,"vectors":[[0,0,1],[0,0,-1]]}"#).unwrap();
        assert_eq!(custom.into_povm().unwrap().family(), Family::Custom);
        fs::remove_dir_all(&dir).ok();
    }
}
