use crate::error::{Error, Result};
use crate::modcat::{kernel, HomSpace, Kernel, Module, Morphism};

/// A free resolution `... -> F_1 -> F_0 -> M -> 0`.
///
/// `maps[0]` is `f_0: F_0 -> M` and `maps[k]` is `f_k: F_k -> F_{k-1}`.
/// Each `f_{k+1}` factors as `syzygies[k].inclusion ∘ covers[k]`, with
/// `covers[k]: F_{k+1} -> ker f_k` the canonical free cover.
#[derive(Clone, Debug)]
pub struct Resolution {
    target: Module,
    modules: Vec<Module>,
    maps: Vec<Morphism>,
    syzygies: Vec<Kernel>,
    covers: Vec<Morphism>,
}

/// `R^k -> M` sending the `j`-th basis vector to the `j`-th generator.
fn canonical_cover(m: &Module) -> Morphism {
    let f = Module::free(m.ring(), m.rank());
    let k = m.rank();
    let matrix = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
    Morphism::new(f, m.clone(), matrix).expect("free modules map anywhere")
}

/// Free resolution with `F_0, ..., F_depth`.
pub fn free_resolution(m: &Module, depth: usize) -> Result<Resolution> {
    if depth < 1 {
        return Err(Error::Precondition("resolution depth must be at least 1".into()));
    }
    let f0 = canonical_cover(m);
    let mut modules = vec![f0.src().clone()];
    let mut maps = vec![f0];
    let mut syzygies = Vec::new();
    let mut covers = Vec::new();
    for _ in 0..depth {
        let k = kernel(maps.last().expect("nonempty"));
        let cover = canonical_cover(&k.module);
        let next = k.inclusion.compose(&cover)?;
        modules.push(next.src().clone());
        maps.push(next);
        syzygies.push(k);
        covers.push(cover);
    }
    Ok(Resolution { target: m.clone(), modules, maps, syzygies, covers })
}

impl Resolution {
    /// A resolution by arbitrary modules: `maps[0]: F_0 -> M` and
    /// `maps[k]: F_k -> F_{k-1}`. Each map must land in the kernel of the
    /// previous one; exactness is left to [`Resolution::is_exact`].
    pub fn from_maps(target: &Module, maps: Vec<Morphism>) -> Result<Resolution> {
        if maps.len() < 2 || maps[0].dst() != target {
            return Err(Error::Shape("a resolution needs F_0 -> M and at least one more map".into()));
        }
        let modules = maps.iter().map(|f| f.src().clone()).collect();
        let mut syzygies = Vec::new();
        let mut covers = Vec::new();
        for k in 1..maps.len() {
            let kz = kernel(&maps[k - 1]);
            covers.push(kz.inclusion.lift_through_mono(&maps[k])?);
            syzygies.push(kz);
        }
        Ok(Resolution { target: target.clone(), modules, maps, syzygies, covers })
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    /// Index of the last free module.
    pub fn depth(&self) -> usize {
        self.modules.len() - 1
    }

    /// `F_k`.
    pub fn free(&self, k: usize) -> &Module {
        &self.modules[k]
    }

    /// `f_k`.
    pub fn map(&self, k: usize) -> &Morphism {
        &self.maps[k]
    }

    /// `ker f_k` with its inclusion into `F_k`.
    pub fn syzygy(&self, k: usize) -> &Kernel {
        &self.syzygies[k]
    }

    /// The epi `F_{k+1} -> ker f_k`.
    pub fn cover(&self, k: usize) -> &Morphism {
        &self.covers[k]
    }

    /// Whether `ker f_k = im f_{k+1}` for every computed `k`, and `f_0` is epi.
    pub fn is_exact(&self) -> bool {
        self.maps[0].is_epi()
            && (1..self.maps.len()).all(|k| {
                self.maps[k - 1].compose(&self.maps[k]).map(|c| c.is_zero()).unwrap_or(false)
                    && self.covers[k - 1].is_epi()
            })
    }

    /// A chain map `self -> other` over the identity of the common target,
    /// built degree by degree by lifting through the maps of `other`.
    pub fn comparison(&self, other: &Resolution) -> Result<Vec<Morphism>> {
        if self.target != other.target {
            return Err(Error::Mismatch("resolutions of different modules".into()));
        }
        let depth = self.depth().min(other.depth());
        let mut comps: Vec<Morphism> = Vec::new();
        let c0 = other.maps[0]
            .lift(&self.maps[0])?
            .ok_or_else(|| Error::Precondition("free module does not lift".into()))?;
        comps.push(c0);
        for k in 1..=depth {
            let want = comps[k - 1].compose(&self.maps[k])?;
            let c =
                other.maps[k].lift(&want)?.ok_or_else(|| Error::Precondition("free module does not lift".into()))?;
            comps.push(c);
        }
        Ok(comps)
    }

    /// `Hom(F_k, D)` for each `k`.
    pub(crate) fn hom_spaces(&self, d: &Module) -> Result<Vec<HomSpace>> {
        self.modules.iter().map(|f| HomSpace::new(vec![(f.clone(), d.clone())])).collect()
    }
}
