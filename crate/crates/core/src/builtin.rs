//! Constructors for the supported duality groups and their resolutions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Alphabet, FreeAbelianGroup, GroupOracle, SearchBounds, Subgroup, SurfaceGroup, Word};
use crate::resolution::{Resolution, SurfaceResolution, TorusResolution};

/// Default cap on the radius of the duality inverse window.
pub const DEFAULT_MAX_WINDOW: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    FreeAbelian { rank: usize },
    Surface { genus: usize },
}

/// A builtin group together with its search limits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub bounds: SearchBounds,
    pub max_window_radius: usize,
}

impl GroupSpec {
    pub fn new(kind: GroupKind) -> Self {
        GroupSpec { kind, bounds: SearchBounds::default(), max_window_radius: DEFAULT_MAX_WINDOW }
    }

    pub fn free_abelian(rank: usize) -> Self {
        Self::new(GroupKind::FreeAbelian { rank })
    }

    pub fn surface(genus: usize) -> Self {
        Self::new(GroupKind::Surface { genus })
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            GroupKind::FreeAbelian { rank: 0 } => Err(Error::Spec("free abelian rank must be at least 1".into())),
            GroupKind::Surface { genus: 0 } => Err(Error::Spec("surface genus must be at least 1".into())),
            GroupKind::FreeAbelian { rank } if rank > 8 => {
                Err(Error::Unsupported(format!("free abelian rank {rank} (at most 8)")))
            }
            _ => Ok(()),
        }
    }

    /// Duality dimension `n`.
    pub fn dimension(&self) -> usize {
        match self.kind {
            GroupKind::FreeAbelian { rank } => rank,
            GroupKind::Surface { .. } => 2,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            GroupKind::Surface { genus } => write!(f, "surface group of genus {genus}"),
        }
    }
}

/// A duality group: its decision procedures and its free resolution.
#[derive(Clone, Debug)]
pub struct PdGroup {
    pub spec: GroupSpec,
    pub oracle: Arc<dyn GroupOracle>,
    pub resolution: Arc<dyn Resolution<Elem = Word>>,
}

impl PdGroup {
    pub fn dimension(&self) -> usize {
        self.oracle.duality_dimension()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.oracle.alphabet()
    }
}

/// Instantiates a builtin group; genus one is the free abelian group of rank two.
pub fn make_group(spec: &GroupSpec) -> Result<PdGroup> {
    spec.validate()?;
    let bounds = spec.bounds.clone();
    let (oracle, resolution): (Arc<dyn GroupOracle>, Arc<dyn Resolution<Elem = Word>>) = match spec.kind {
        GroupKind::FreeAbelian { rank } => {
            let g = Arc::new(FreeAbelianGroup::new(rank, bounds));
            (g.clone(), Arc::new(TorusResolution::new(g)?))
        }
        GroupKind::Surface { genus: 1 } => {
            let g = Arc::new(FreeAbelianGroup::with_alphabet(2, Alphabet::Surface { genus: 1 }, bounds));
            (g.clone(), Arc::new(TorusResolution::new(g)?))
        }
        GroupKind::Surface { genus } => {
            let g = Arc::new(SurfaceGroup::new(genus, bounds)?);
            (g.clone(), Arc::new(SurfaceResolution::new(g)?))
        }
    };
    Ok(PdGroup { spec: spec.clone(), oracle, resolution })
}

/// Exact intersection of two centralizer-type subgroups.
pub fn intersect_centralizers(group: &dyn GroupOracle, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    group.intersect(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(make_group(&GroupSpec::free_abelian(1)).unwrap().dimension(), 1);
        assert_eq!(make_group(&GroupSpec::free_abelian(2)).unwrap().dimension(), 2);
        assert_eq!(make_group(&GroupSpec::surface(2)).unwrap().dimension(), 2);
        let torus = make_group(&GroupSpec::surface(1)).unwrap();
        assert_eq!(torus.dimension(), 2);
        assert!(torus.oracle.is_abelian());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(make_group(&GroupSpec::free_abelian(0)).is_err());
        assert!(make_group(&GroupSpec::surface(0)).is_err());
    }

    #[test]
    fn whole_group_absorbs() {
        let g = make_group(&GroupSpec::surface(2)).unwrap();
        let b = Subgroup::Cyclic(g.alphabet().parse("a1").unwrap());
        assert_eq!(intersect_centralizers(g.oracle.as_ref(), &Subgroup::Whole, &b).unwrap(), b);
    }
}
