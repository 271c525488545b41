//! Height reward and group-relative advantages.
//!
//! The reward compares a candidate's rendered height against the target
//! height through the ratio rho = h_hat / h. Ratios inside the tolerance
//! band [1 - gamma, 1] earn the full reward of 1; shorter documents earn
//! gamma + rho, taller ones 1 - alpha * (rho - 1); the result clamps at 0.
//! Candidates that fail to parse receive reward 0 so group statistics stay
//! well-defined at a fixed group size.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::text::FontMetricModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardConfig<S> {
    /// Tolerance factor: ratios in [1 - gamma, 1] earn the full reward.
    pub gamma: S,
    /// Overflow penalty coefficient.
    pub alpha: S,
}

impl<S: Scalar> Default for RewardConfig<S> {
    fn default() -> Self {
        Self {
            gamma: S::of(0.05),
            alpha: S::of(2.0),
        }
    }
}

impl<S: Scalar> RewardConfig<S> {
    pub fn validate(&self) -> Result<(), RewardError> {
        let g = self.gamma.as_f64();
        if !(0.0..1.0).contains(&g) {
            return Err(RewardError::InvalidGamma(g));
        }
        let a = self.alpha.as_f64();
        if !a.is_finite() || a <= 0.0 {
            return Err(RewardError::InvalidAlpha(a));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewardBranch {
    /// rho within [1 - gamma, 1].
    InBand,
    /// rho below 1 - gamma.
    Underflow,
    /// rho above 1.
    Overflow,
    /// The candidate could not be parsed or rendered; reward 0 by policy.
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardReport<S> {
    pub h_hat: S,
    pub h: S,
    pub rho: S,
    pub reward: S,
    pub branch: RewardBranch,
    pub gamma: S,
    pub alpha: S,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RewardError {
    #[error("target height must be positive, got {0}")]
    NonPositiveTarget(f64),
    #[error("gamma must lie in [0, 1), got {0}")]
    InvalidGamma(f64),
    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
}

/// Scores a rendered height against the target height.
pub fn height_reward<S: Scalar>(
    h_hat: S,
    h: S,
    cfg: &RewardConfig<S>,
) -> Result<RewardReport<S>, RewardError> {
    cfg.validate()?;
    if h <= S::zero() {
        return Err(RewardError::NonPositiveTarget(h.as_f64()));
    }
    let one = S::one();
    let rho = h_hat / h;
    let (branch, raw) = if rho > one {
        (RewardBranch::Overflow, one - cfg.alpha * (rho - one))
    } else if rho >= one - cfg.gamma {
        (RewardBranch::InBand, one)
    } else {
        (RewardBranch::Underflow, cfg.gamma + rho)
    };
    let reward = if raw < S::zero() { S::zero() } else { raw };
    Ok(RewardReport {
        h_hat,
        h,
        rho,
        reward,
        branch,
        gamma: cfg.gamma,
        alpha: cfg.alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdvantageConfig<S> {
    pub group_size: usize,
    /// Stabilizer added to the population standard deviation.
    pub epsilon: S,
}

impl<S: Scalar> Default for AdvantageConfig<S> {
    fn default() -> Self {
        Self {
            group_size: 5,
            epsilon: S::of(1e-6),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdvantageError {
    #[error("expected a group of {expected} rewards, got {got}")]
    GroupSizeMismatch { expected: usize, got: usize },
}

/// Group-relative advantages: (r_i - mean) / (population std + epsilon).
/// The group must match the configured size exactly.
pub fn group_advantages<S: Scalar>(
    rewards: &[S],
    cfg: &AdvantageConfig<S>,
) -> Result<Vec<S>, AdvantageError> {
    if rewards.len() != cfg.group_size {
        return Err(AdvantageError::GroupSizeMismatch {
            expected: cfg.group_size,
            got: rewards.len(),
        });
    }
    Ok(advantages_unchecked(rewards, cfg.epsilon))
}

/// Group-relative advantages without a group-size check, for free-size
/// batches.
pub fn advantages_unchecked<S: Scalar>(rewards: &[S], epsilon: S) -> Vec<S> {
    if rewards.is_empty() {
        return Vec::new();
    }
    let n = S::from_usize_lossy(rewards.len());
    let mean = rewards.iter().fold(S::zero(), |a, b| a + *b) / n;
    let var = rewards
        .iter()
        .map(|r| (*r - mean) * (*r - mean))
        .fold(S::zero(), |a, b| a + b)
        / n;
    let std = var.sqrt();
    rewards.iter().map(|r| (*r - mean) / (std + epsilon)).collect()
}

/// Constants emitted verbatim for downstream trainers; nothing here uses
/// them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarlExportConfig {
    pub kl_coefficient: f64,
    pub clip_ratio: f64,
}

impl Default for HarlExportConfig {
    fn default() -> Self {
        Self {
            kl_coefficient: 0.01,
            clip_ratio: 0.2,
        }
    }
}

/// Parses, styles, and lays out a candidate, returning its rendered height.
/// `None` when the candidate does not parse.
pub fn render_height<S: Scalar>(
    html: &str,
    viewport: (S, S),
    model: &FontMetricModel<S>,
) -> Option<S> {
    let doc = crate::lay_out_source(html, viewport, model).ok()?;
    Some(doc.tree.document_height())
}

/// Renders and scores a batch of candidates against one target, returning
/// per-candidate reports and their group-relative advantages.
pub fn reward_candidates<S: Scalar, T: AsRef<str>>(
    candidates: &[T],
    target: (S, S),
    cfg: &RewardConfig<S>,
    epsilon: S,
    model: &FontMetricModel<S>,
) -> Result<(Vec<RewardReport<S>>, Vec<S>), RewardError> {
    cfg.validate()?;
    let h = target.1;
    if h <= S::zero() {
        return Err(RewardError::NonPositiveTarget(h.as_f64()));
    }
    let reports: Vec<RewardReport<S>> = candidates
        .iter()
        .map(|c| match render_height(c.as_ref(), target, model) {
            Some(h_hat) => height_reward(h_hat, h, cfg).expect("config validated"),
            None => RewardReport {
                h_hat: S::zero(),
                h,
                rho: S::zero(),
                reward: S::zero(),
                branch: RewardBranch::Invalid,
                gamma: cfg.gamma,
                alpha: cfg.alpha,
            },
        })
        .collect();
    let rewards: Vec<S> = reports.iter().map(|r| r.reward).collect();
    let advantages = advantages_unchecked(&rewards, epsilon);
    Ok((reports, advantages))
}

/// One reward request as carried by the stdio and HTTP services.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RewardRequest {
    pub target: TargetDims,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TargetDims {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RewardResponse {
    pub reports: Vec<ReportLine>,
    pub advantages: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportLine {
    pub rho: f64,
    pub reward: f64,
    pub branch: RewardBranch,
}

/// Serves one reward request; shared by the stdio and HTTP front ends.
pub fn handle_reward_request(req: &RewardRequest) -> Result<RewardResponse, RewardError> {
    let defaults = RewardConfig::<f64>::default();
    let cfg = RewardConfig {
        gamma: req.gamma.unwrap_or(defaults.gamma),
        alpha: req.alpha.unwrap_or(defaults.alpha),
    };
    let target = (req.target.width, req.target.height);
    let (reports, advantages) = reward_candidates(
        &req.candidates,
        target,
        &cfg,
        1e-6,
        &FontMetricModel::default(),
    )?;
    Ok(RewardResponse {
        reports: reports
            .iter()
            .map(|r| ReportLine {
                rho: r.rho,
                reward: r.reward,
                branch: r.branch,
            })
            .collect(),
        advantages,
    })
}
