//! The toric model: rays with multipliers, the class group, and an optional fan.

use crate::divisor::{kernel_pairing, Class, ClassGroup};
use crate::error::{Error, Result};
use crate::exactlin::{gcd_all, primitive, Int};
use crate::fan::{Fan, StackyFan};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricModel {
    pub name: String,
    /// Rank of M.
    pub dim: usize,
    /// Primitive ray generators u_ρ.
    pub rays: Vec<Vec<Int>>,
    pub mult: Vec<Int>,
    pub cl: ClassGroup,
    pub fan: Option<Fan>,
}

impl ToricModel {
    pub fn from_fan(name: &str, sf: StackyFan, class_basis: Option<&[usize]>) -> Result<Self> {
        let betas = sf.betas();
        let cl = ClassGroup::from_pairing(&betas, class_basis)?;
        Ok(ToricModel {
            name: name.to_string(),
            dim: sf.fan.dim,
            rays: sf.fan.rays.clone(),
            mult: sf.mult.clone(),
            cl,
            fan: Some(sf.fan),
        })
    }

    /// Cox data: the lattice M is the kernel of the degree map.
    pub fn from_cox(name: &str, degrees: &[Vec<Int>], free_rank: usize, torsion: Vec<Int>) -> Result<Self> {
        let cl = ClassGroup::from_degrees(degrees, free_rank, torsion)?;
        let betas = kernel_pairing(&cl);
        let dim = degrees.len() - free_rank;
        let mut rays = Vec::with_capacity(betas.len());
        let mut mult = Vec::with_capacity(betas.len());
        for (j, b) in betas.iter().enumerate() {
            if b.len() != dim {
                return Err(Error::Precondition("degree data does not define a lattice of the expected rank".into()));
            }
            let g = gcd_all(b);
            if g.is_zero() {
                return Err(Error::Precondition(format!("variable {j} has vanishing pairing")));
            }
            rays.push(primitive(b));
            mult.push(g);
        }
        Ok(ToricModel { name: name.to_string(), dim, rays, mult, cl, fan: None })
    }

    pub fn nrays(&self) -> usize {
        self.rays.len()
    }

    pub fn betas(&self) -> Vec<Vec<Int>> {
        self.rays.iter().zip(&self.mult).map(|(u, b)| u.iter().map(|x| x * b).collect()).collect()
    }

    pub fn stacky(&self) -> Option<StackyFan> {
        self.fan.as_ref().map(|f| StackyFan { fan: f.clone(), mult: self.mult.clone() })
    }

    /// Stacky fan on the given cones with the model's rays and multipliers,
    /// so that its class group is the model's.
    pub fn chamber_stack(&self, cones: &[Vec<usize>]) -> StackyFan {
        StackyFan {
            fan: Fan { dim: self.dim, rays: self.rays.clone(), cones: cones.to_vec() },
            mult: self.mult.clone(),
        }
    }

    pub fn degrees(&self) -> Vec<Class> {
        self.cl.degrees()
    }

    pub fn is_plain(&self) -> bool {
        self.mult.iter().all(|b| b.is_one())
    }
}
