//! ORB-style binary image descriptors, used to rank image diversity before
//! any model has been trained.
//!
//! The pipeline is single-scale: FAST-9 keypoints on the radius-3 Bresenham
//! circle, ranked by segment-test strength; an intensity-centroid
//! orientation per keypoint; a 256-bit rotated BRIEF descriptor with a
//! seeded Gaussian test pattern; and per-image average pooling of the bits
//! into one real-valued vector. There is no scale pyramid and no learned
//! test pattern — the descriptors feed a diversity ranking, not feature
//! matching.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::metrics::{BinaryVector, FeatureVector};

/// Number of intensity-comparison pairs in a descriptor.
pub const BRIEF_PATTERN_SIZE: usize = 256;

/// Test offsets live inside the disc of this radius around a keypoint, so a
/// rotated read never strays more than `PATCH_RADIUS` pixels away.
pub const PATCH_RADIUS: i32 = 15;

/// Minimum contiguous arc length of the segment test.
const FAST_ARC: usize = 9;

/// The 16 pixel offsets of the radius-3 Bresenham circle, clockwise from
/// twelve o'clock. The set is closed under quarter-turn rotation (an index
/// shift of 4), which makes keypoint detection exactly equivariant to 90°
/// image rotations.
const CIRCLE: [(i32, i32); 16] = [
    (0, -3),
    (1, -3),
    (2, -2),
    (3, -1),
    (3, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 3),
    (-1, 3),
    (-2, 2),
    (-3, 1),
    (-3, 0),
    (-3, -1),
    (-2, -2),
    (-1, -3),
];

/// Errors from the descriptor pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("image {width}x{height} is smaller than the required {min}x{min}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        min: usize,
    },
    #[error("patch around ({x}, {y}) with radius {radius} leaves the image")]
    PatchOutOfBounds { x: usize, y: usize, radius: usize },
    #[error("pixel buffer length {len} does not match {width}x{height}")]
    BadDimensions {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("test pattern offset ({x}, {y}) outside the radius-{radius} patch disc")]
    OffsetOutOfPatch { x: i32, y: i32, radius: i32 },
}

/// Grayscale image, intensities 0–255, row-major.
#[derive(Debug, Clone)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Image, DescriptorError> {
        if pixels.len() != width * height {
            return Err(DescriptorError::BadDimensions {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> u8) -> Image {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Image {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Quarter-turn clockwise rotation: (x, y) maps to (h − 1 − y, x).
    /// Grid rotations are lossless, which makes them usable as an exact
    /// oracle for detector equivariance.
    pub fn rotated_cw(&self) -> Image {
        Image::from_fn(self.height, self.width, |x, y| {
            self.get(y, self.height - 1 - x)
        })
    }
}

/// A detected corner: position, segment-test strength, and orientation
/// (zero until assigned).
#[derive(Debug, Clone, PartialEq)]
pub struct Keypoint {
    pub x: usize,
    pub y: usize,
    pub score: f64,
    pub angle: f64,
}

/// FAST-9 corner detection.
///
/// A pixel qualifies when at least nine contiguous pixels of its radius-3
/// circle are all brighter than center + threshold or all darker than
/// center − threshold. Its score is the sum of |circle − center| − threshold
/// over the strongest qualifying arc. Results are sorted by descending
/// score (ties by lower y, then x) and truncated to `max_keypoints`.
pub fn detect_fast_keypoints(
    img: &Image,
    threshold: u8,
    max_keypoints: usize,
) -> Result<Vec<Keypoint>, DescriptorError> {
    const MIN_SIDE: usize = 32;
    if img.width() < MIN_SIDE || img.height() < MIN_SIDE {
        return Err(DescriptorError::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            min: MIN_SIDE,
        });
    }
    debug_assert!(threshold > 0, "a zero threshold detects everything");

    let t = threshold as i32;
    let mut keypoints = Vec::new();
    for y in 3..img.height() - 3 {
        for x in 3..img.width() - 3 {
            let center = img.get(x, y) as i32;
            let mut bright = [false; 16];
            let mut dark = [false; 16];
            let mut diffs = [0i32; 16];
            for (i, &(dx, dy)) in CIRCLE.iter().enumerate() {
                let v = img.get((x as i32 + dx) as usize, (y as i32 + dy) as usize) as i32;
                diffs[i] = (v - center).abs();
                bright[i] = v > center + t;
                dark[i] = v < center - t;
            }
            let score = match (arc_score(&bright, &diffs, t), arc_score(&dark, &diffs, t)) {
                (Some(b), Some(d)) => Some(b.max(d)),
                (Some(b), None) => Some(b),
                (None, Some(d)) => Some(d),
                (None, None) => None,
            };
            if let Some(score) = score {
                keypoints.push(Keypoint {
                    x,
                    y,
                    score: score as f64,
                    angle: 0.0,
                });
            }
        }
    }
    keypoints.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.y.cmp(&b.y))
            .then(a.x.cmp(&b.x))
    });
    keypoints.truncate(max_keypoints);
    Ok(keypoints)
}

/// Strongest qualifying arc under `mask`: the maximal contiguous circular
/// run of set positions with length ≥ 9, scored as Σ (|diff| − threshold).
fn arc_score(mask: &[bool; 16], diffs: &[i32; 16], threshold: i32) -> Option<i32> {
    if mask.iter().all(|&b| b) {
        return Some(diffs.iter().map(|&d| d - threshold).sum());
    }
    let mut best: Option<i32> = None;
    for start in 0..16 {
        // Maximal runs begin where the previous position is unset.
        if !mask[start] || mask[(start + 15) % 16] {
            continue;
        }
        let mut len = 0;
        let mut sum = 0;
        let mut i = start;
        while mask[i] {
            sum += diffs[i] - threshold;
            len += 1;
            i = (i + 1) % 16;
        }
        if len >= FAST_ARC {
            best = Some(best.map_or(sum, |b: i32| b.max(sum)));
        }
    }
    best
}

/// Intensity-centroid orientation over the disc of `patch_radius` around
/// the keypoint: with moments m_pq = Σ x^p y^q I(x, y) taken in offsets
/// from the keypoint (y grows downward, matching row order), the angle is
/// atan2(m01, m10) wrapped to [0, 2π). A radially symmetric patch has
/// m01 = m10 = 0 and is assigned angle 0.
pub fn keypoint_orientation(
    img: &Image,
    kp: &Keypoint,
    patch_radius: usize,
) -> Result<f64, DescriptorError> {
    let r = patch_radius as i32;
    let (x, y) = (kp.x as i32, kp.y as i32);
    if x < r || y < r || x + r >= img.width() as i32 || y + r >= img.height() as i32 {
        return Err(DescriptorError::PatchOutOfBounds {
            x: kp.x,
            y: kp.y,
            radius: patch_radius,
        });
    }
    let mut m10: i64 = 0;
    let mut m01: i64 = 0;
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy > r * r {
                continue;
            }
            let v = img.get((x + dx) as usize, (y + dy) as usize) as i64;
            m10 += dx as i64 * v;
            m01 += dy as i64 * v;
        }
    }
    if m10 == 0 && m01 == 0 {
        return Ok(0.0);
    }
    let mut angle = libm::atan2(m01 as f64, m10 as f64);
    if angle < 0.0 {
        angle += 2.0 * core::f64::consts::PI;
    }
    Ok(angle)
}

/// The intensity-comparison test pattern shared by every descriptor of a
/// run: 256 offset pairs drawn once from an isotropic Gaussian (σ = 31/5)
/// and kept inside the radius-15 disc, so that a steered pair stays inside
/// the patch for any rotation.
#[derive(Debug, Clone)]
pub struct BriefPattern {
    pairs: Vec<((i32, i32), (i32, i32))>,
    seed: u64,
}

impl BriefPattern {
    /// Draws the standard 256-pair pattern. Offsets falling outside the
    /// patch disc are redrawn, so the distribution is a truncated Gaussian.
    pub fn generate(seed: u64) -> BriefPattern {
        let sigma = 31.0 / 5.0;
        let normal = Normal::new(0.0, sigma).expect("valid sigma");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| loop {
            let x = libm::round(normal.sample(rng)) as i32;
            let y = libm::round(normal.sample(rng)) as i32;
            if x * x + y * y <= PATCH_RADIUS * PATCH_RADIUS {
                return (x, y);
            }
        };
        let pairs = (0..BRIEF_PATTERN_SIZE)
            .map(|_| (draw(&mut rng), draw(&mut rng)))
            .collect();
        BriefPattern { pairs, seed }
    }

    /// Builds a pattern from explicit pairs (test fixtures); every offset
    /// must lie inside the patch disc.
    pub fn from_pairs(
        pairs: Vec<((i32, i32), (i32, i32))>,
    ) -> Result<BriefPattern, DescriptorError> {
        for &(a, b) in &pairs {
            for (x, y) in [a, b] {
                if x * x + y * y > PATCH_RADIUS * PATCH_RADIUS {
                    return Err(DescriptorError::OffsetOutOfPatch {
                        x,
                        y,
                        radius: PATCH_RADIUS,
                    });
                }
            }
        }
        Ok(BriefPattern { pairs, seed: 0 })
    }

    pub fn pairs(&self) -> &[((i32, i32), (i32, i32))] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Rotated BRIEF descriptor for one keypoint: each test pair is steered by
/// the keypoint angle (offsets rotated, then rounded to the nearest pixel)
/// and the bit is set iff the first read is strictly darker than the
/// second. Ties produce zero bits, so a constant image yields the zero
/// descriptor.
pub fn rbrief_describe(
    img: &Image,
    kp: &Keypoint,
    pattern: &BriefPattern,
) -> Result<BinaryVector, DescriptorError> {
    let (sin, cos) = (libm::sin(kp.angle), libm::cos(kp.angle));
    let mut bits = Vec::with_capacity(pattern.len());
    let read = |(ox, oy): (i32, i32)| -> Result<u8, DescriptorError> {
        let rx = libm::round(ox as f64 * cos - oy as f64 * sin) as i32;
        let ry = libm::round(ox as f64 * sin + oy as f64 * cos) as i32;
        let px = kp.x as i32 + rx;
        let py = kp.y as i32 + ry;
        if px < 0 || py < 0 || px >= img.width() as i32 || py >= img.height() as i32 {
            return Err(DescriptorError::PatchOutOfBounds {
                x: kp.x,
                y: kp.y,
                radius: PATCH_RADIUS as usize,
            });
        }
        Ok(img.get(px as usize, py as usize))
    };
    for &(a, b) in pattern.pairs() {
        bits.push(read(a)? < read(b)?);
    }
    Ok(BinaryVector::new(bits))
}

/// Per-image pooled descriptor plus a degenerate-input flag.
#[derive(Debug, Clone)]
pub struct PooledDescriptor {
    pub features: FeatureVector,
    pub keypoint_count: usize,
}

impl PooledDescriptor {
    /// True when the image produced no descriptors and the zero vector was
    /// substituted. Such images stay eligible for selection.
    pub fn had_no_keypoints(&self) -> bool {
        self.keypoint_count == 0
    }
}

/// Average-pools keypoint descriptors into one image descriptor: component
/// i is the fraction of descriptors with bit i set, so every entry lies in
/// [0, 1]. An empty input pools to the zero vector (dimension
/// [`BRIEF_PATTERN_SIZE`]) with the degenerate flag set.
pub fn pool_image_descriptor(descs: &[BinaryVector]) -> PooledDescriptor {
    if descs.is_empty() {
        return PooledDescriptor {
            features: FeatureVector::new(vec![0.0; BRIEF_PATTERN_SIZE]),
            keypoint_count: 0,
        };
    }
    let dim = descs[0].len();
    debug_assert!(descs.iter().all(|d| d.len() == dim));
    let mut counts = vec![0usize; dim];
    for desc in descs {
        for (count, &bit) in counts.iter_mut().zip(desc.bits()) {
            if bit {
                *count += 1;
            }
        }
    }
    let n = descs.len() as f64;
    PooledDescriptor {
        features: FeatureVector::new(counts.into_iter().map(|c| c as f64 / n).collect()),
        keypoint_count: descs.len(),
    }
}

/// Detection and description parameters of the pipeline.
#[derive(Debug, Clone)]
pub struct OrbParams {
    pub fast_threshold: u8,
    pub max_keypoints: usize,
    pub patch_radius: usize,
}

impl Default for OrbParams {
    fn default() -> Self {
        OrbParams {
            fast_threshold: 20,
            max_keypoints: 500,
            patch_radius: PATCH_RADIUS as usize,
        }
    }
}

/// Full per-image pipeline: detect, drop keypoints within `patch_radius`
/// of a border, orient, describe, pool.
pub fn orb_image_descriptor(
    img: &Image,
    pattern: &BriefPattern,
    params: &OrbParams,
) -> Result<PooledDescriptor, DescriptorError> {
    let keypoints = detect_fast_keypoints(img, params.fast_threshold, params.max_keypoints)?;
    let r = params.patch_radius;
    let mut descriptors = Vec::new();
    for mut kp in keypoints {
        if kp.x < r || kp.y < r || kp.x + r >= img.width() || kp.y + r >= img.height() {
            continue;
        }
        kp.angle = keypoint_orientation(img, &kp, r)?;
        descriptors.push(rbrief_describe(img, &kp, pattern)?);
    }
    let pooled = pool_image_descriptor(&descriptors);
    if pooled.had_no_keypoints() {
        log::warn!("image produced no usable keypoints; pooled descriptor is the zero vector");
    }
    Ok(pooled)
}
