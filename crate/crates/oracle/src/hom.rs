//! Hom-sets by exhaustive filtering.

use metcat_core::{Error, ExtDist, MetSpace, NonexpMap, Result};

/// All nonexpanding maps `dom -> cod`, in odometer order (first point varies
/// fastest).
#[derive(Clone, Debug)]
pub struct HomSet {
    pub dom: MetSpace,
    pub cod: MetSpace,
    pub maps: Vec<Vec<usize>>,
}

impl HomSet {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn to_maps(&self) -> Vec<NonexpMap> {
        self.maps
            .iter()
            .map(|a| NonexpMap::new(self.dom.clone(), self.cod.clone(), a.clone()).expect("filtered map"))
            .collect()
    }
}

pub fn is_nonexpanding(dom: &MetSpace, cod: &MetSpace, assign: &[usize]) -> bool {
    (0..dom.len()).all(|i| (i + 1..dom.len()).all(|j| cod.d(assign[i], assign[j]) <= dom.d(i, j)))
}

/// Every function `dom -> cod`, filtered. Fails when `|cod|^|dom|` exceeds `cap`.
pub fn enumerate_hom(dom: &MetSpace, cod: &MetSpace, cap: u64) -> Result<HomSet> {
    let (n, m) = (dom.len(), cod.len());
    let total = (m as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::Usage(format!("hom-set enumeration needs {total} candidates, over the cap of {cap}")));
    }
    let mut maps = Vec::new();
    if n == 0 {
        maps.push(Vec::new());
    } else if m > 0 {
        let mut a = vec![0usize; n];
        'outer: loop {
            if is_nonexpanding(dom, cod, &a) {
                maps.push(a.clone());
            }
            for slot in a.iter_mut() {
                *slot += 1;
                if *slot < m {
                    continue 'outer;
                }
                *slot = 0;
            }
            break;
        }
    }
    Ok(HomSet { dom: dom.clone(), cod: cod.clone(), maps })
}

/// `outer ∘ inner` on assignment vectors.
pub fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&i| outer[i]).collect()
}

/// Pointwise sup distance between parallel assignments into `cod`.
pub fn sup_distance(cod: &MetSpace, f: &[usize], g: &[usize]) -> ExtDist {
    f.iter().zip(g).map(|(&a, &b)| cod.d(a, b)).max().unwrap_or(ExtDist::ZERO)
}
