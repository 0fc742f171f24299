//! Dense real-valued 2-D fields and the validated image types built on them.

use std::ops::Deref;

use crate::error::{Error, Result};

/// A row-major real matrix. Used for spectra, raw reconstructions and any
/// other plane that is not constrained to the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl Field {
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::Shape(format!("empty field {height}x{width}")));
        }
        if data.len() != height * width {
            return Err(Error::Shape(format!(
                "{} values for a {height}x{width} field",
                data.len()
            )));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Self {
        assert!(height > 0 && width > 0, "empty field");
        Self {
            height,
            width,
            data: vec![value; height * width],
        }
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self::filled(height, width, 0.0)
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(height > 0 && width > 0, "empty field");
        let mut data = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Self {
            height,
            width,
            data,
        }
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.width + col] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Row/column of the first maximum in row-major order.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (i, &v) in self.data.iter().enumerate() {
            if v > self.data[best] {
                best = i;
            }
        }
        (best / self.width, best % self.width)
    }

    /// Largest absolute elementwise difference.
    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Total variation with wrap-around neighbours (the frequency plane is periodic).
    pub fn total_variation(&self) -> f64 {
        let (h, w) = self.shape();
        let mut tv = 0.0;
        for r in 0..h {
            for c in 0..w {
                let v = self.get(r, c);
                tv += (self.get(r, (c + 1) % w) - v).abs();
                tv += (self.get((r + 1) % h, c) - v).abs();
            }
        }
        tv
    }

    pub(crate) fn same_shape(&self, other: &Field, what: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.height, self.width, other.height, other.width
            )));
        }
        Ok(())
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            Some(i) => Err(Error::NonFinite {
                row: i / self.width,
                col: i % self.width,
            }),
            None => Ok(()),
        }
    }

    /// Circularly shift by (`dr`, `dc`): output(r + dr, c + dc) = input(r, c).
    pub fn roll(&self, dr: usize, dc: usize) -> Self {
        let (h, w) = self.shape();
        let mut out = Field::zeros(h, w);
        for r in 0..h {
            for c in 0..w {
                out.set((r + dr) % h, (c + dc) % w, self.get(r, c));
            }
        }
        out
    }
}

/// Grayscale working image: at least 2x2, every value finite and in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Image2D(Field);

impl Image2D {
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        Self::from_field(Field::new(height, width, data)?)
    }

    pub fn from_field(field: Field) -> Result<Self> {
        let (h, w) = field.shape();
        if h < 2 || w < 2 {
            return Err(Error::Shape(format!(
                "image must be at least 2x2, got {h}x{w}"
            )));
        }
        field.check_finite()?;
        if let Some(i) = field.data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::OutOfRange {
                row: i / w,
                col: i % w,
                value: field.data[i],
            });
        }
        Ok(Self(field))
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Result<Self> {
        Self::from_field(Field::filled(height.max(1), width.max(1), value))
    }

    pub fn field(&self) -> &Field {
        &self.0
    }

    pub fn into_field(self) -> Field {
        self.0
    }
}

impl Deref for Image2D {
    type Target = Field;

    fn deref(&self) -> &Field {
        &self.0
    }
}

/// RGB image with three [0, 1] planes of equal shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    pub red: Image2D,
    pub green: Image2D,
    pub blue: Image2D,
}

impl ColorImage {
    pub fn new(red: Image2D, green: Image2D, blue: Image2D) -> Result<Self> {
        red.same_shape(&green, "green plane")?;
        red.same_shape(&blue, "blue plane")?;
        Ok(Self { red, green, blue })
    }

    /// Three identical planes.
    pub fn from_gray(gray: &Image2D) -> Self {
        Self {
            red: gray.clone(),
            green: gray.clone(),
            blue: gray.clone(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.red.shape()
    }

    /// Rec. 601 luma.
    pub fn luma(&self) -> Image2D {
        let data = izip3(&self.red, &self.green, &self.blue)
            .map(|(r, g, b)| (0.299 * r + 0.587 * g + 0.114 * b).clamp(0.0, 1.0))
            .collect();
        let (h, w) = self.shape();
        Image2D(Field::new(h, w, data).expect("shape checked at construction"))
    }

    /// Intensity, red-green and blue-yellow opponent planes.
    ///
    /// Intensity is the channel mean; the two chromatic planes are signed and
    /// vanish exactly for gray input.
    pub fn opponent(&self) -> [Field; 3] {
        let (h, w) = self.shape();
        let mut i = Vec::with_capacity(h * w);
        let mut rg = Vec::with_capacity(h * w);
        let mut by = Vec::with_capacity(h * w);
        for (r, g, b) in izip3(&self.red, &self.green, &self.blue) {
            i.push((r + g + b) / 3.0);
            rg.push(r - g);
            by.push(b - 0.5 * (r + g));
        }
        [i, rg, by].map(|d| Field::new(h, w, d).expect("shape checked at construction"))
    }
}

fn izip3<'a>(
    a: &'a Field,
    b: &'a Field,
    c: &'a Field,
) -> impl Iterator<Item = (f64, f64, f64)> + 'a {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .zip(c.as_slice())
        .map(|((&x, &y), &z)| (x, y, z))
}

/// How the colour planes of an input are turned into processing channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelMode {
    /// Luma only.
    #[default]
    Gray,
    /// Intensity, red-green and blue-yellow, fused by pixelwise maximum.
    Opponent,
}

/// Any input the pipelines accept.
#[derive(Debug, Clone, PartialEq)]
pub enum InputImage {
    Gray(Image2D),
    Color(ColorImage),
}

impl InputImage {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            InputImage::Gray(g) => g.shape(),
            InputImage::Color(c) => c.shape(),
        }
    }

    pub fn to_color(&self) -> ColorImage {
        match self {
            InputImage::Gray(g) => ColorImage::from_gray(g),
            InputImage::Color(c) => c.clone(),
        }
    }

    pub fn luma(&self) -> Image2D {
        match self {
            InputImage::Gray(g) => g.clone(),
            InputImage::Color(c) => c.luma(),
        }
    }

    /// Processing channels for `mode`.
    pub fn channels(&self, mode: ChannelMode) -> Vec<Field> {
        match mode {
            ChannelMode::Gray => vec![self.luma().into_field()],
            ChannelMode::Opponent => self.to_color().opponent().into(),
        }
    }
}

impl From<Image2D> for InputImage {
    fn from(img: Image2D) -> Self {
        InputImage::Gray(img)
    }
}

impl From<ColorImage> for InputImage {
    fn from(img: ColorImage) -> Self {
        InputImage::Color(img)
    }
}
