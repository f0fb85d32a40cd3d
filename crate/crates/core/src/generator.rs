//! Formal generators and the alphabets that name them.

use crate::error::{Error, Result};

/// A formal generator: an id into an [`Alphabet`], a homological degree and
/// a filtration weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    pub id: u16,
    pub degree: i16,
    pub weight: u16,
}

impl Gen {
    pub fn is_odd(self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// Names for generators. Names are unique; ids are assigned in insertion
/// order so the canonical order of generators is the order they were added.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    entries: Vec<(String, Gen)>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a generator of weight 1.
    pub fn add(&mut self, name: &str, degree: i16) -> Gen {
        self.add_weighted(name, degree, 1)
            .expect("duplicate generator name")
    }

    pub fn add_weighted(&mut self, name: &str, degree: i16, weight: u16) -> Result<Gen> {
        if self.lookup(name).is_some() {
            return Err(Error::Constraint(format!("duplicate generator name {name:?}")));
        }
        if weight == 0 {
            return Err(Error::Constraint("generator weight must be positive".into()));
        }
        let g = Gen {
            id: self.entries.len() as u16,
            degree,
            weight,
        };
        self.entries.push((name.to_string(), g));
        Ok(g)
    }

    pub fn lookup(&self, name: &str) -> Option<Gen> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| *g)
    }

    pub fn get(&self, name: &str) -> Result<Gen> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn name(&self, g: Gen) -> &str {
        self.entries
            .get(g.id as usize)
            .map(|(n, _)| n.as_str())
            .unwrap_or("?")
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        self.entries.iter().map(|(_, g)| *g)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
