//! The fixed eight-state basis of one flip-flop qubit.
//!
//! States are labelled by orbital (g/e), electron spin (down/up) and nuclear
//! spin (Up/Down). The canonical ordering is frozen to
//! `{g dn Up, g dn Dn, e dn Up, g up Up, g up Dn, e dn Dn, e up Up, e up Dn}`;
//! the logical qubit lives on indices 0 and 4.

/// Orbital state of the shared electron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orbital {
    Ground,
    Excited,
}

/// Electron spin projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElectronSpin {
    Down,
    Up,
}

/// Nuclear spin projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuclearSpin {
    Up,
    Down,
}

/// One of the eight basis states, with its frozen index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisLabel {
    pub orbital: Orbital,
    pub electron: ElectronSpin,
    pub nucleus: NuclearSpin,
    pub index: usize,
}

/// Dimension of the single-qubit space.
pub const DIM1: usize = 8;
/// Dimension of the two-qubit space.
pub const DIM2: usize = 64;

/// Index of logical |0> = g,dn,Up.
pub const LOGICAL0: usize = 0;
/// Index of logical |1> = g,up,Dn.
pub const LOGICAL1: usize = 4;

/// The frozen basis ordering.
pub const BASIS: [BasisLabel; DIM1] = {
    use ElectronSpin::*;
    use NuclearSpin as N;
    use Orbital::*;
    [
        BasisLabel { orbital: Ground, electron: Down, nucleus: N::Up, index: 0 },
        BasisLabel { orbital: Ground, electron: Down, nucleus: N::Down, index: 1 },
        BasisLabel { orbital: Excited, electron: Down, nucleus: N::Up, index: 2 },
        BasisLabel { orbital: Ground, electron: Up, nucleus: N::Up, index: 3 },
        BasisLabel { orbital: Ground, electron: Up, nucleus: N::Down, index: 4 },
        BasisLabel { orbital: Excited, electron: Down, nucleus: N::Down, index: 5 },
        BasisLabel { orbital: Excited, electron: Up, nucleus: N::Up, index: 6 },
        BasisLabel { orbital: Excited, electron: Up, nucleus: N::Down, index: 7 },
    ]
};

/// Natural (tensor-product) index of a label: orbital*4 + electron*2 + nucleus,
/// with sub-orderings (g,e), (dn,up), (Up,Dn).
pub fn natural_index(l: &BasisLabel) -> usize {
    let o = match l.orbital {
        Orbital::Ground => 0,
        Orbital::Excited => 1,
    };
    let s = match l.electron {
        ElectronSpin::Down => 0,
        ElectronSpin::Up => 1,
    };
    let n = match l.nucleus {
        NuclearSpin::Up => 0,
        NuclearSpin::Down => 1,
    };
    o * 4 + s * 2 + n
}

/// `PERM[i]` is the natural index of frozen-basis state `i`.
pub const PERM: [usize; DIM1] = [0, 1, 4, 2, 3, 5, 6, 7];

/// Logical indices of the two-qubit product space, ordered {00, 01, 10, 11}.
pub const LOGICAL2: [usize; 4] = [
    LOGICAL0 * DIM1 + LOGICAL0,
    LOGICAL0 * DIM1 + LOGICAL1,
    LOGICAL1 * DIM1 + LOGICAL0,
    LOGICAL1 * DIM1 + LOGICAL1,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_matches_labels() {
        for (i, l) in BASIS.iter().enumerate() {
            assert_eq!(l.index, i);
            assert_eq!(natural_index(l), PERM[i]);
        }
    }

    #[test]
    fn perm_is_a_permutation() {
        let mut seen = [false; DIM1];
        for &p in &PERM {
            assert!(!seen[p]);
            seen[p] = true;
        }
    }

    #[test]
    fn logical_states_are_antiparallel_ground_orbital() {
        let l0 = BASIS[LOGICAL0];
        assert_eq!(l0.orbital, Orbital::Ground);
        assert_eq!(l0.electron, ElectronSpin::Down);
        assert_eq!(l0.nucleus, NuclearSpin::Up);
        let l1 = BASIS[LOGICAL1];
        assert_eq!(l1.orbital, Orbital::Ground);
        assert_eq!(l1.electron, ElectronSpin::Up);
        assert_eq!(l1.nucleus, NuclearSpin::Down);
    }
}
