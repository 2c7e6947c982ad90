use std::io::{self, Read, Write};

/// Number of conserved variables.
pub const N_EQ: usize = 4;

/// All solution coefficients `c^m_{i,j}`, stored equation-major, then by
/// mode, with the element index innermost:
/// `data[((m * n_p) + j) * N + i]`.
///
/// One mode of one variable is therefore a contiguous row over all
/// elements.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientArray {
    n_p: usize,
    n_elements: usize,
    data: Vec<f64>,
}

impl CoefficientArray {
    pub fn zeros(n_p: usize, n_elements: usize) -> Self {
        Self {
            n_p,
            n_elements,
            data: vec![0.0; N_EQ * n_p * n_elements],
        }
    }

    pub fn from_vec(n_p: usize, n_elements: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), N_EQ * n_p * n_elements);
        Self { n_p, n_elements, data }
    }

    pub fn n_modes(&self) -> usize {
        self.n_p
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    #[inline]
    pub fn index(&self, m: usize, j: usize, i: usize) -> usize {
        (m * self.n_p + j) * self.n_elements + i
    }

    #[inline]
    pub fn get(&self, m: usize, j: usize, i: usize) -> f64 {
        self.data[self.index(m, j, i)]
    }

    #[inline]
    pub fn set(&mut self, m: usize, j: usize, i: usize, v: f64) {
        let k = self.index(m, j, i);
        self.data[k] = v;
    }

    /// Row of mode `j` of variable `m` over all elements.
    pub fn row(&self, m: usize, j: usize) -> &[f64] {
        let n = self.n_elements;
        let start = (m * self.n_p + j) * n;
        &self.data[start..start + n]
    }

    pub fn row_mut(&mut self, m: usize, j: usize) -> &mut [f64] {
        let n = self.n_elements;
        let start = (m * self.n_p + j) * n;
        &mut self.data[start..start + n]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Coefficients of element `i` as `[m][j]` (flattened, `m * n_p + j`).
    #[inline]
    pub fn gather(&self, i: usize, out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate().take(N_EQ * self.n_p) {
            *o = self.data[r * self.n_elements + i];
        }
    }

    /// Solution of element `i` given basis values `phi` at one point.
    #[inline]
    pub fn eval(&self, i: usize, phi: &[f64]) -> [f64; N_EQ] {
        let mut u = [0.0; N_EQ];
        for (m, um) in u.iter_mut().enumerate() {
            for (j, p) in phi.iter().enumerate() {
                *um += self.data[(m * self.n_p + j) * self.n_elements + i] * p;
            }
        }
        u
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: f64, x: &Self) {
        assert_eq!(self.data.len(), x.data.len());
        for (s, v) in self.data.iter_mut().zip(&x.data) {
            *s += a * v;
        }
    }

    /// `max |self - other|` over every entry.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// Split row-structured storage (`n_rows` rows of length `n`) into
/// per-chunk views: entry `c` holds, for every row, the slice covering
/// columns `[c * chunk, (c + 1) * chunk)`. Chunks are disjoint, so they can
/// be handed to different workers.
pub(crate) fn column_chunks(data: &mut [f64], n: usize, chunk: usize) -> Vec<Vec<&mut [f64]>> {
    if n == 0 {
        return Vec::new();
    }
    let n_rows = data.len() / n;
    let n_chunks = n.div_ceil(chunk);
    let mut out: Vec<Vec<&mut [f64]>> = (0..n_chunks).map(|_| Vec::with_capacity(n_rows)).collect();
    for row in data.chunks_mut(n) {
        for (c, piece) in row.chunks_mut(chunk).enumerate() {
            out[c].push(piece);
        }
    }
    out
}

const MAGIC: &[u8; 8] = b"DG2DCKPT";
const VERSION: u32 = 1;

/// Checkpoint header and payload.
///
/// Layout, all little-endian: the 8 bytes `DG2DCKPT`, `u32` version (1),
/// `u32` M, `u32` n_p, `u64` N, `f64` t, `u64` step, then `M * n_p * N`
/// `f64` coefficients in array order.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub coeffs: CoefficientArray,
    pub t: f64,
    pub step: u64,
}

impl Checkpoint {
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(N_EQ as u32).to_le_bytes())?;
        w.write_all(&(self.coeffs.n_p as u32).to_le_bytes())?;
        w.write_all(&(self.coeffs.n_elements as u64).to_le_bytes())?;
        w.write_all(&self.t.to_le_bytes())?;
        w.write_all(&self.step.to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.coeffs.data.len() * 8);
        for v in &self.coeffs.data {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf)
    }

    pub fn read_from<R: Read>(mut r: R) -> io::Result<Self> {
        let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(bad("not a checkpoint file"));
        }
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        let mut u32_ = |r: &mut R| -> io::Result<u32> {
            r.read_exact(&mut b4)?;
            Ok(u32::from_le_bytes(b4))
        };
        let version = u32_(&mut r)?;
        if version != VERSION {
            return Err(bad(&format!("unsupported checkpoint version {version}")));
        }
        let m = u32_(&mut r)? as usize;
        if m != N_EQ {
            return Err(bad(&format!("checkpoint has {m} equations, expected {N_EQ}")));
        }
        let n_p = u32_(&mut r)? as usize;
        r.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8) as usize;
        r.read_exact(&mut b8)?;
        let t = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let step = u64::from_le_bytes(b8);
        let len = N_EQ
            .checked_mul(n_p)
            .and_then(|x| x.checked_mul(n))
            .ok_or_else(|| bad("checkpoint size overflows"))?;
        let mut bytes = vec![0u8; len * 8];
        r.read_exact(&mut bytes)?;
        let data = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Self {
            coeffs: CoefficientArray::from_vec(n_p, n, data),
            t,
            step,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_element_innermost() {
        let mut c = CoefficientArray::zeros(3, 5);
        c.set(2, 1, 4, 7.0);
        assert_eq!(c.data()[(2 * 3 + 1) * 5 + 4], 7.0);
        assert_eq!(c.row(2, 1)[4], 7.0);
        assert_eq!(c.data().len(), 4 * 3 * 5);
    }

    #[test]
    fn column_chunks_cover_every_entry_once() {
        let mut data: Vec<f64> = (0..30).map(|x| x as f64).collect();
        let views = column_chunks(&mut data, 10, 4);
        assert_eq!(views.len(), 3);
        assert_eq!(views[2][1], &[18.0, 19.0][..]);
        let total: usize = views.iter().flat_map(|v| v.iter().map(|s| s.len())).sum();
        assert_eq!(total, 30);
    }

    #[test]
    fn checkpoint_round_trip() {
        let data = (0..4 * 3 * 2).map(|x| x as f64 * 0.1 - 1.0).collect();
        let ck = Checkpoint {
            coeffs: CoefficientArray::from_vec(3, 2, data),
            t: 0.125,
            step: 42,
        };
        let mut bytes = Vec::new();
        ck.write_to(&mut bytes).unwrap();
        assert_eq!(&bytes[..8], b"DG2DCKPT");
        assert_eq!(bytes.len(), 8 + 4 * 3 + 8 * 3 + 8 * 24);
        assert_eq!(Checkpoint::read_from(&bytes[..]).unwrap(), ck);
        bytes[0] = b'X';
        assert!(Checkpoint::read_from(&bytes[..]).is_err());
    }
}
