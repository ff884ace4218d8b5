use std::ops::{Index, IndexMut};

use crate::numkit::NumError;
use crate::scalar::Scalar;

/// Dense real vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vector<T> {
    entries: Vec<T>,
}

impl<T: Scalar> Vector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self, NumError> {
        if entries.is_empty() {
            return Err(NumError::Empty);
        }
        Ok(Self { entries })
    }

    pub fn from_f64(entries: &[f64]) -> Result<Self, NumError> {
        Self::new(entries.iter().map(|&v| T::lit(v)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Self {
            entries: vec![T::zero(); dim],
        }
    }

    pub fn filled(dim: usize, value: T) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Self {
            entries: vec![value; dim],
        }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[i] = T::one();
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.entries
    }

    pub fn into_vec(self) -> Vec<T> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.entries.iter()
    }

    pub fn check_dim(&self, other: &Self) -> Result<(), NumError> {
        if self.dim() != other.dim() {
            return Err(NumError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn dot(&self, other: &Self) -> Result<T, NumError> {
        self.check_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a * b)
            .sum())
    }

    /// Euclidean norm.
    pub fn norm2(&self) -> T {
        self.entries.iter().map(|&a| a * a).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |m, &a| if a.abs() > m { a.abs() } else { m })
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|a| a.is_finite())
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            entries: self.entries.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, NumError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NumError> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: T, other: &Self) -> Result<Self, NumError> {
        self.zip_with(other, |a, b| a + c * b)
    }

    /// In-place `self += c * other`.
    pub fn axpy(&mut self, c: T, other: &Self) -> Result<(), NumError> {
        self.check_dim(other)?;
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a += c * b;
        }
        Ok(())
    }

    /// `a * self + b * other`
    pub fn combine(&self, a: T, b: T, other: &Self) -> Result<Self, NumError> {
        self.zip_with(other, |u, v| a * u + b * v)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self, NumError> {
        self.check_dim(other)?;
        Ok(Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            entries: self.entries.iter().map(|&a| f(a)).collect(),
        }
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.entries[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.entries[i]
    }
}
