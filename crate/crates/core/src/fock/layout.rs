use crate::error::{Error, Result};

/// Ordered list of bosonic modes, each truncated to a local dimension.
///
/// Composite indices are row-major: the first mode is the slowest-varying
/// digit. Labels are unique and keep their position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeLayout {
    dims: Vec<usize>,
    labels: Vec<String>,
    strides: Vec<usize>,
    total: usize,
}

impl ModeLayout {
    pub fn new<S: AsRef<str>>(modes: &[(S, usize)]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::Usage("a layout needs at least one mode".into()));
        }
        let mut labels: Vec<String> = Vec::with_capacity(modes.len());
        let mut dims = Vec::with_capacity(modes.len());
        for (label, dim) in modes {
            let label = label.as_ref();
            if *dim == 0 {
                return Err(Error::Usage(format!("mode `{label}` has dimension 0")));
            }
            if labels.iter().any(|l| l == label) {
                return Err(Error::Usage(format!("duplicate mode label `{label}`")));
            }
            labels.push(label.to_string());
            dims.push(*dim);
        }
        let mut strides = vec![1usize; dims.len()];
        let mut total = 1usize;
        for i in (0..dims.len()).rev() {
            strides[i] = total;
            total = total
                .checked_mul(dims[i])
                .ok_or_else(|| Error::Usage("composite dimension overflows usize".into()))?;
        }
        Ok(Self {
            dims,
            labels,
            strides,
            total,
        })
    }

    /// Every mode truncated at the same local dimension.
    pub fn uniform<S: AsRef<str>>(labels: &[S], dim: usize) -> Result<Self> {
        let modes: Vec<(&str, usize)> = labels.iter().map(|l| (l.as_ref(), dim)).collect();
        Self::new(&modes)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn num_modes(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Usage(format!("no mode labelled `{label}` in layout")))
    }

    pub fn encode(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.dims.len() {
            return Err(Error::Usage(format!(
                "expected {} occupations, got {}",
                self.dims.len(),
                occupations.len()
            )));
        }
        let mut index = 0;
        for (i, &n) in occupations.iter().enumerate() {
            if n >= self.dims[i] {
                return Err(Error::Index {
                    label: self.labels[i].clone(),
                    occupation: n,
                    dim: self.dims[i],
                });
            }
            index += n * self.strides[i];
        }
        Ok(index)
    }

    pub fn decode(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.total {
            return Err(Error::Usage(format!(
                "flat index {index} outside layout of dimension {}",
                self.total
            )));
        }
        Ok(self
            .dims
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| (index / s) % d)
            .collect())
    }

    /// Occupation of mode `pos` at flat index `index`.
    #[inline]
    pub(crate) fn digit(&self, index: usize, pos: usize) -> usize {
        (index / self.strides[pos]) % self.dims[pos]
    }

    /// Sub-layout made of the listed mode positions, in layout order.
    pub(crate) fn sublayout(&self, positions: &[usize]) -> Result<ModeLayout> {
        let modes: Vec<(&str, usize)> = positions
            .iter()
            .map(|&p| (self.labels[p].as_str(), self.dims[p]))
            .collect();
        ModeLayout::new(&modes)
    }
}

/// Row-major flat index of `occupations` over `dims`.
pub fn encode_index(occupations: &[usize], layout: &ModeLayout) -> Result<usize> {
    layout.encode(occupations)
}

/// Inverse of [`encode_index`].
pub fn decode_index(index: usize, layout: &ModeLayout) -> Result<Vec<usize>> {
    layout.decode(index)
}
