//! Finite alphabets for what the agent sees (Σ) and what it emits (Ω).

use std::fmt;

use crate::error::{Error, Result};

/// Index of a letter inside its alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub usize);

impl Letter {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Letters the world shows to the agent (Σ).
    Input,
    /// Letters the agent acts with (Ω).
    Output,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Input => f.write_str("sigma"),
            Role::Output => f.write_str("omega"),
        }
    }
}

/// An ordered, duplicate-free, nonempty set of symbols. The position of a
/// symbol is its [`Letter`] index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    role: Role,
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(role: Role, letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::InvalidConfig(format!("{role} alphabet is empty")));
        }
        for (i, l) in letters.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::InvalidConfig(format!(
                    "{role} letter {l:?} must be nonempty and contain no whitespace"
                )));
            }
            if letters[..i].contains(l) {
                return Err(Error::InvalidConfig(format!("duplicate {role} letter {l:?}")));
            }
        }
        Ok(Alphabet { role, letters })
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.letters[letter.0]
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.letters.iter().position(|l| l == name).map(Letter)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.0 < self.letters.len()
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = Letter> {
        (0..self.letters.len()).map(Letter)
    }

    pub fn names(&self) -> &[String] {
        &self.letters
    }

    /// Same symbols in the same order, regardless of role.
    pub fn same_letters(&self, other: &Alphabet) -> bool {
        self.letters == other.letters
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letters.join(" "))
    }
}
