//! One player's local connections: a partial matching on that player's pipe
//! endpoints. Alice's endpoints are `0..=s` where `0` is the tap; Bob's are
//! `1..=s`.

use std::fmt;

use crate::error::{Error, Result};

/// Endpoint id of the water tap on Alice's side.
pub const TAP: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Alice,
    Bob,
}

impl Side {
    /// Output bit the water encodes when it exits on this side.
    pub fn bit(self) -> bool {
        matches!(self, Side::Bob)
    }

    pub fn from_bit(bit: bool) -> Side {
        if bit {
            Side::Bob
        } else {
            Side::Alice
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Alice => Side::Bob,
            Side::Bob => Side::Alice,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Alice => "alice",
            Side::Bob => "bob",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Checks the matching invariants for a list of connections without building
/// a [`Wiring`].
pub fn validate_wiring(side: Side, pipes: usize, pairs: &[(usize, usize)]) -> Result<()> {
    Wiring::new(side, pipes, pairs).map(|_| ())
}

/// A validated partial matching, stored as a partner table indexed by endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Wiring {
    side: Side,
    partner: Vec<Option<usize>>,
}

impl Wiring {
    pub fn new(side: Side, pipes: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut w = Wiring::empty(side, pipes);
        for &(a, b) in pairs {
            w.connect(a, b)?;
        }
        Ok(w)
    }

    pub fn empty(side: Side, pipes: usize) -> Self {
        Wiring {
            side,
            partner: vec![None; pipes + 1],
        }
    }

    /// Adds one connection, rejecting anything that breaks the matching.
    pub fn connect(&mut self, a: usize, b: usize) -> Result<()> {
        let side = self.side;
        for e in [a, b] {
            if e == TAP && side == Side::Bob {
                return Err(Error::TapOnBobSide);
            }
            if e > self.pipes() {
                return Err(Error::EndpointOutOfRange {
                    side,
                    endpoint: e,
                    pipes: self.pipes(),
                });
            }
        }
        if a == b {
            return Err(Error::SelfLoop { side, endpoint: a });
        }
        for e in [a, b] {
            if self.partner[e].is_some() {
                return Err(Error::DuplicateEndpoint { side, endpoint: e });
            }
        }
        self.partner[a] = Some(b);
        self.partner[b] = Some(a);
        Ok(())
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn pipes(&self) -> usize {
        self.partner.len() - 1
    }

    pub fn partner(&self, endpoint: usize) -> Option<usize> {
        self.partner.get(endpoint).copied().flatten()
    }

    /// Partner table over endpoints `0..=s`; entry 0 is always `None` for Bob.
    pub fn partners(&self) -> &[Option<usize>] {
        &self.partner
    }

    /// Connections as `(a, b)` with `a < b`, in ascending order of `a`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(a, p)| p.filter(|&b| a < b).map(|b| (a, b)))
            .collect()
    }

    /// Renames pipe `i` to `perm[i - 1]` for every pipe `1..=s`; the tap
    /// keeps id 0. `perm` must be a permutation of `1..=s`.
    pub fn relabel(&self, perm: &[usize]) -> Wiring {
        assert_eq!(perm.len(), self.pipes());
        let map = |e: usize| if e == TAP { TAP } else { perm[e - 1] };
        let mut partner = vec![None; self.partner.len()];
        for (a, p) in self.partner.iter().enumerate() {
            if let Some(b) = p {
                partner[map(a)] = Some(map(*b));
            }
        }
        Wiring {
            side: self.side,
            partner,
        }
    }

    /// The same connections on a game with `extra` more, unused pipes.
    pub fn padded(&self, extra: usize) -> Wiring {
        let mut partner = self.partner.clone();
        partner.resize(partner.len() + extra, None);
        Wiring {
            side: self.side,
            partner,
        }
    }
}
