//! Seeded simulation of the zero-error feedback protocols.
//!
//! A [`Link`] is the physical SD-DMC seen through one reduction: plain DMC,
//! state averaged out, Shannon strategies, or `(y, s)` as the output. Each
//! protocol runs over a link, and [`monte_carlo`] repeats a protocol with one
//! derived random stream per trial so results do not depend on how trials are
//! scheduled across threads.
//!
//! Every protocol here is zero-error by construction; the statistics still
//! count errors so that a broken construction shows up as a nonzero count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{blahut_arimoto, BaOptions, Maximizer};
use crate::channel::{Dmc, SdDmc};
use crate::error::{Error, Result};
use crate::positivity::{check_dmc_vl, state_group_witness, vl_positivity, Witness};
use crate::reductions::{
    average_states, joint_index, joint_output_channel, shannon_strategy_channel, StrategyLetter,
    DEFAULT_STRATEGY_CAP,
};
use crate::rng::{domain, sample_index, substream, StreamRng};
use crate::si::SiModel;

/// Draws a state from `Q` by inverse CDF.
pub fn sample_state<R: Rng + ?Sized>(channel: &SdDmc, rng: &mut R) -> usize {
    sample_index(channel.state_probs(), rng)
}

/// One channel use: `y ~ W(.|x,s)` by inverse CDF over the stored row order.
pub fn step<R: Rng + ?Sized>(channel: &SdDmc, x: usize, s: usize, rng: &mut R) -> usize {
    sample_index(channel.row(x, s), rng)
}

pub fn step_dmc<R: Rng + ?Sized>(channel: &Dmc, x: usize, rng: &mut R) -> usize {
    sample_index(channel.row(x), rng)
}

/// The state that explains the pair `(x, y)`, if exactly one does.
pub fn infer_state(channel: &SdDmc, x: usize, y: usize) -> Option<usize> {
    let mut found = None;
    for s in 0..channel.num_states() {
        if channel.reaches(y, x, s) {
            if found.is_some() {
                return None;
            }
            found = Some(s);
        }
    }
    found
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InferenceStats {
    pub slots: usize,
    pub correct: usize,
    pub ambiguous: usize,
}

/// Sends uniform inputs for `slots` slots and checks [`infer_state`] against
/// the drawn state.
pub fn simulate_state_inference(channel: &SdDmc, slots: usize, seed: u64) -> InferenceStats {
    let mut rng = substream(seed, domain::TRIAL, 0);
    let mut stats = InferenceStats {
        slots,
        correct: 0,
        ambiguous: 0,
    };
    for _ in 0..slots {
        let s = sample_state(channel, &mut rng);
        let x = rng.random_range(0..channel.num_inputs());
        let y = step(channel, x, s, &mut rng);
        match infer_state(channel, x, y) {
            Some(t) if t == s => stats.correct += 1,
            Some(_) => {}
            None => stats.ambiguous += 1,
        }
    }
    stats
}

/// One slot of a trace. `output` is the physical channel output; slots are
/// numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub slot: usize,
    /// `None` for stateless links.
    pub state: Option<usize>,
    pub input: usize,
    pub output: usize,
    /// The state the encoder used to pick `input`, when it used one.
    pub encoder_state: Option<usize>,
    /// Decoder decision computed at this slot.
    pub decision: Option<u64>,
}

/// Slot counter with optional recording.
#[derive(Debug, Default)]
pub struct Recorder {
    slots: usize,
    records: Option<Vec<SlotRecord>>,
}

impl Recorder {
    pub fn counting() -> Self {
        Recorder::default()
    }

    pub fn recording() -> Self {
        Recorder {
            slots: 0,
            records: Some(Vec::new()),
        }
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    fn push(&mut self, mut record: SlotRecord) {
        self.slots += 1;
        if let Some(r) = &mut self.records {
            record.slot = self.slots;
            r.push(record);
        }
    }

    fn decide(&mut self, value: u64) {
        if let Some(last) = self.records.as_mut().and_then(|r| r.last_mut()) {
            last.decision = Some(value);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub slots: Vec<SlotRecord>,
    pub message: u64,
    pub decoded: u64,
    pub tau: usize,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum TraceLine<'a> {
    Slot(&'a SlotRecord),
    End { message: u64, decoded: u64, tau: usize },
}

impl Trace {
    /// One JSON object per slot followed by an `end` record.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.slots {
            out.push_str(&serde_json::to_string(&TraceLine::Slot(s)).expect("serializable"));
            out.push('\n');
        }
        let end = TraceLine::End {
            message: self.message,
            decoded: self.decoded,
            tau: self.tau,
        };
        out.push_str(&serde_json::to_string(&end).expect("serializable"));
        out.push('\n');
        out
    }
}

/// The physical channel seen through one reduction.
#[derive(Debug, Clone)]
pub enum Link {
    Dmc(Dmc),
    /// Nobody uses the state.
    Averaged(SdDmc),
    /// Letter `i` sends `letters[i](s)` in state `s`.
    Strategy { channel: SdDmc, letters: Vec<StrategyLetter> },
    /// The decoder sees the state; output `(y, s)` is numbered by [`joint_index`].
    JointOutput(SdDmc),
}

impl Link {
    /// The link whose equivalent DMC carries the variable-length positivity
    /// condition for `si`.
    pub fn for_model(channel: &SdDmc, si: SiModel) -> Result<Link> {
        if si.decoder_sees_state() {
            Ok(Link::JointOutput(channel.clone()))
        } else if si == SiModel::C_NONE || si == SiModel::NC_NONE {
            let (_, letters) = shannon_strategy_channel(channel, DEFAULT_STRATEGY_CAP)?;
            Ok(Link::Strategy {
                channel: channel.clone(),
                letters,
            })
        } else {
            Ok(Link::Averaged(channel.clone()))
        }
    }

    /// The DMC this link is equivalent to.
    pub fn reduced(&self) -> Result<Dmc> {
        Ok(match self {
            Link::Dmc(d) => d.clone(),
            Link::Averaged(ch) => average_states(ch),
            Link::Strategy { channel, .. } => shannon_strategy_channel(channel, DEFAULT_STRATEGY_CAP)?.0,
            Link::JointOutput(ch) => joint_output_channel(ch),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Link::Dmc(_) => "dmc",
            Link::Averaged(_) => "averaged",
            Link::Strategy { .. } => "strategy",
            Link::JointOutput(_) => "joint-output",
        }
    }

    /// Sends reduced input `letter` once; returns the reduced output.
    pub fn transmit<R: Rng + ?Sized>(&self, letter: usize, rng: &mut R, rec: &mut Recorder) -> usize {
        let (record, out) = match self {
            Link::Dmc(d) => {
                let y = step_dmc(d, letter, rng);
                (slot(None, letter, y, None), y)
            }
            Link::Averaged(ch) => {
                let s = sample_state(ch, rng);
                let y = step(ch, letter, s, rng);
                (slot(Some(s), letter, y, None), y)
            }
            Link::Strategy { channel, letters } => {
                let s = sample_state(channel, rng);
                let x = letters[letter].input(s);
                let y = step(channel, x, s, rng);
                (slot(Some(s), x, y, Some(s)), y)
            }
            Link::JointOutput(ch) => {
                let s = sample_state(ch, rng);
                let y = step(ch, letter, s, rng);
                (slot(Some(s), letter, y, None), joint_index(y, s, ch.num_states()))
            }
        };
        rec.push(record);
        out
    }
}

fn slot(state: Option<usize>, input: usize, output: usize, encoder_state: Option<usize>) -> SlotRecord {
    SlotRecord {
        slot: 0,
        state,
        input,
        output,
        encoder_state,
        decision: None,
    }
}

/// Result of one protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub message: u64,
    pub decoded: u64,
    pub tau: usize,
    /// The encoder stopped in the same slot as the decoder decided.
    pub synchronized: bool,
    /// Han-Sato only: the phase-1 decision was wrong and was resent.
    pub nack: bool,
}

/// One bit over a link with a disprover: `y` never follows `x`, and `x'`
/// reaches `y`.
///
/// Each round sends `(x, x')` for 0 and `(x', x)` for 1. Output `y` can only
/// come from `x'`, so the first slot showing `y` reveals the bit; the
/// decoder declares at the end of a round with pattern `(not y, y)` or
/// `(y, not y)` and `(y, y)` cannot occur. Rounds succeed with probability
/// `W(y|x')`.
#[derive(Debug, Clone)]
pub struct DisproverPlan {
    link: Link,
    pub x: usize,
    pub x_prime: usize,
    pub y: usize,
    success: f64,
}

impl DisproverPlan {
    pub fn new(link: Link) -> Result<Self> {
        let dmc = link.reduced()?;
        let Some(Witness::Disprover { x, y }) = check_dmc_vl(&dmc).witness else {
            return Err(Error::PrecondFailed(format!("{} link has no disprover", link.name())));
        };
        let x_prime = (0..dmc.num_inputs())
            .find(|&xp| dmc.prob(y, xp) > 0.0)
            .expect("disprover outputs are reachable");
        Ok(DisproverPlan {
            success: dmc.prob(y, x_prime),
            link,
            x,
            x_prime,
            y,
        })
    }

    pub fn link(&self) -> &Link {
        &self.link
    }

    /// Probability that one round ends the protocol.
    pub fn success_probability(&self) -> f64 {
        self.success
    }

    pub fn send<R: Rng + ?Sized>(&self, bit: bool, rng: &mut R, rec: &mut Recorder) -> bool {
        let (first, second) = if bit { (self.x_prime, self.x) } else { (self.x, self.x_prime) };
        loop {
            let a = self.link.transmit(first, rng, rec) == self.y;
            let b = self.link.transmit(second, rng, rec) == self.y;
            debug_assert!(!(a && b), "disprover violated");
            match (a, b) {
                (false, true) => {
                    rec.decide(0);
                    return false;
                }
                (true, false) => {
                    rec.decide(1);
                    return true;
                }
                _ => {}
            }
        }
    }
}

/// Sends one bit over a DMC with the disprover protocol; returns the decoded
/// bit and the stopping time.
pub fn run_disprover_bit<R: Rng + ?Sized>(channel: &Dmc, bit: bool, rng: &mut R) -> Result<(bool, usize)> {
    let plan = DisproverPlan::new(Link::Dmc(channel.clone()))?;
    let mut rec = Recorder::counting();
    let decoded = plan.send(bit, rng, &mut rec);
    Ok((decoded, rec.slots()))
}

/// When the decoder-only-state bit protocol ends a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopRule {
    /// End as soon as the slot carrying `x'` shows `y` (necessarily in a
    /// state from `S*`). Rounds succeed with probability `P(x' -> y)`.
    #[default]
    Relaxed,
    /// Also require the other slot to show something other than `y`.
    Strict,
}

/// One bit with state known only at the decoder, from a witness
/// `(x, x', y, S*)`: `x' -> y` happens only in states of `S*`, and there `y`
/// never follows `x`.
///
/// Rounds send `(x, x')` for 0 and `(x', x)` for 1. The decoder, which sees
/// states, reads `y` in a state from `S*` as proof that `x'` was sent in that
/// slot. The encoder sees only outputs but knows which slot carried `x'`;
/// seeing `y` there tells it the state was in `S*`, so both sides stop
/// together without the encoder knowing any state.
#[derive(Debug, Clone)]
pub struct Theorem5Plan {
    channel: SdDmc,
    pub x: usize,
    pub x_prime: usize,
    pub y: usize,
    pub group: Vec<usize>,
    pub rule: StopRule,
}

impl Theorem5Plan {
    pub fn new(channel: &SdDmc, rule: StopRule) -> Result<Self> {
        let Some(Witness::StateGroup { x, x_prime, y, states }) = state_group_witness(channel) else {
            return Err(Error::PrecondFailed("no identifiable state group".to_owned()));
        };
        Ok(Theorem5Plan {
            channel: channel.clone(),
            x,
            x_prime,
            y,
            group: states,
            rule,
        })
    }

    /// Probability that one round ends the protocol (the same for both bits).
    pub fn success_probability(&self) -> f64 {
        let ch = &self.channel;
        let q = ch.state_probs();
        let hit: f64 = (0..ch.num_states()).map(|s| q[s] * ch.prob(self.y, self.x_prime, s)).sum();
        match self.rule {
            StopRule::Relaxed => hit,
            StopRule::Strict => {
                let miss: f64 = (0..ch.num_states()).map(|s| q[s] * (1.0 - ch.prob(self.y, self.x, s))).sum();
                hit * miss
            }
        }
    }

    /// Returns the decoded bit and whether the encoder stopped with the decoder.
    pub fn send<R: Rng + ?Sized>(&self, bit: bool, rng: &mut R, rec: &mut Recorder) -> (bool, bool) {
        let ch = &self.channel;
        let (first, second) = if bit { (self.x_prime, self.x) } else { (self.x, self.x_prime) };
        let in_group = |s: usize| self.group.contains(&s);
        loop {
            let s1 = sample_state(ch, rng);
            let y1 = step(ch, first, s1, rng);
            rec.push(slot(Some(s1), first, y1, None));
            let s2 = sample_state(ch, rng);
            let y2 = step(ch, second, s2, rng);
            rec.push(slot(Some(s2), second, y2, None));

            let (hit1, hit2) = (y1 == self.y, y2 == self.y);
            let decoder = match self.rule {
                StopRule::Relaxed => match (hit1 && in_group(s1), hit2 && in_group(s2)) {
                    (false, true) => Some(false),
                    (true, false) => Some(true),
                    _ => None,
                },
                StopRule::Strict => match (hit1, hit2) {
                    (false, true) if in_group(s2) => Some(false),
                    (true, false) if in_group(s1) => Some(true),
                    _ => None,
                },
            };
            let x_prime_hit = if bit { hit1 } else { hit2 };
            let other_hit = if bit { hit2 } else { hit1 };
            let encoder_stops = match self.rule {
                StopRule::Relaxed => x_prime_hit,
                StopRule::Strict => x_prime_hit && !other_hit,
            };
            if let Some(d) = decoder {
                rec.decide(d as u64);
                return (d, encoder_stops);
            }
            if encoder_stops {
                return (!bit, false);
            }
        }
    }
}

/// Sends one bit with the decoder-only-state protocol; returns the decoded
/// bit and the stopping time.
pub fn run_theorem5_bit<R: Rng + ?Sized>(channel: &SdDmc, bit: bool, rng: &mut R) -> Result<(bool, usize)> {
    let plan = Theorem5Plan::new(channel, StopRule::default())?;
    let mut rec = Recorder::counting();
    let (decoded, synchronized) = plan.send(bit, rng, &mut rec);
    assert!(synchronized, "encoder and decoder stopped in different rounds");
    Ok((decoded, rec.slots()))
}

/// Largest message size accepted by the two-phase scheme.
pub const MAX_MESSAGE_BITS: usize = 16;

/// Two-phase zero-error scheme.
///
/// Phase 1 sends the message with a random block code of length `n1` over
/// the reduced channel matching the state-information model, decoded by
/// maximum likelihood. The encoder replays the decoder from the feedback
/// (its information includes the decoder's) and sends ACK or NACK with the
/// zero-error bit protocol. After a NACK the message is resent bit by bit
/// with the same protocol.
///
/// Codeword letters are drawn from the capacity-achieving law of the
/// reduced channel; codewords are kept distinct when the law allows it.
#[derive(Debug, Clone)]
pub struct HanSatoPlan {
    pub msg_bits: usize,
    pub n1: usize,
    codebook: Vec<Vec<usize>>,
    /// `ln W(z|c)` over the reduced channel, indexed `[c][z]`.
    log_lik: Vec<Vec<f64>>,
    bit: DisproverPlan,
}

impl HanSatoPlan {
    pub fn new(channel: &SdDmc, si: SiModel, msg_bits: usize, n1: usize, code_seed: u64, code_id: u64) -> Result<Self> {
        if !si.is_standard() {
            return Err(Error::UnsupportedModel(format!(
                "the two-phase scheme needs the encoder to replay the decoder; {si} does not allow it"
            )));
        }
        if msg_bits == 0 || msg_bits > MAX_MESSAGE_BITS {
            return Err(Error::InvalidArgument(format!("msg_bits must be in 1..={MAX_MESSAGE_BITS}")));
        }
        if n1 == 0 {
            return Err(Error::InvalidArgument("n1 must be positive".to_owned()));
        }
        let verdict = vl_positivity(channel, si);
        if !verdict.decision.is_positive() {
            return Err(Error::PrecondFailed(format!("variable-length positivity fails for {si}")));
        }
        let link = Link::for_model(channel, si)?;
        let reduced = link.reduced()?;
        let letter_law = match blahut_arimoto(&reduced, &BaOptions::default()) {
            Ok(r) => r.maximizer,
            Err(Error::NoConvergence(r)) => r.maximizer,
            Err(e) => return Err(e),
        };
        let Maximizer::Input { p } = letter_law else {
            unreachable!("blahut_arimoto returns an input law")
        };
        let codebook = random_codebook(&p, 1 << msg_bits, n1, code_seed, code_id);
        let log_lik = reduced.rows().map(|row| row.iter().map(|w| w.ln()).collect()).collect();
        Ok(HanSatoPlan {
            msg_bits,
            n1,
            codebook,
            log_lik,
            bit: DisproverPlan::new(link)?,
        })
    }

    pub fn codebook(&self) -> &[Vec<usize>] {
        &self.codebook
    }

    pub fn bit_plan(&self) -> &DisproverPlan {
        &self.bit
    }

    /// Maximum-likelihood decision; ties go to the lowest index.
    pub fn decode(&self, received: &[usize]) -> u64 {
        let mut best = (f64::NEG_INFINITY, 0);
        for (m, word) in self.codebook.iter().enumerate() {
            let ll: f64 = word.iter().zip(received).map(|(&c, &z)| self.log_lik[c][z]).sum();
            if ll > best.0 {
                best = (ll, m);
            }
        }
        best.1 as u64
    }

    pub fn send<R: Rng + ?Sized>(&self, message: u64, rng: &mut R, rec: &mut Recorder) -> Outcome {
        let link = self.bit.link();
        let word = &self.codebook[message as usize];
        let received: Vec<usize> = word.iter().map(|&c| link.transmit(c, rng, rec)).collect();
        let guess = self.decode(&received);
        // The encoder computes the same guess from the feedback.
        let nack = guess != message;
        let nack_seen = self.bit.send(nack, rng, rec);
        let decoded = if nack_seen {
            (0..self.msg_bits).rev().fold(0u64, |acc, i| {
                let b = self.bit.send((message >> i) & 1 == 1, rng, rec);
                (acc << 1) | b as u64
            })
        } else {
            guess
        };
        rec.decide(decoded);
        Outcome {
            message,
            decoded,
            tau: rec.slots(),
            synchronized: nack_seen == nack,
            nack,
        }
    }
}

fn random_codebook(p: &[f64], size: usize, n: usize, seed: u64, code_id: u64) -> Vec<Vec<usize>> {
    const ATTEMPTS: usize = 1_000;
    let mut rng = substream(seed, domain::CODEBOOK, code_id);
    let mut book: Vec<Vec<usize>> = Vec::with_capacity(size);
    for _ in 0..size {
        let mut word: Vec<usize> = (0..n).map(|_| sample_index(p, &mut rng)).collect();
        for _ in 0..ATTEMPTS {
            if !book.contains(&word) {
                break;
            }
            word = (0..n).map(|_| sample_index(p, &mut rng)).collect();
        }
        book.push(word);
    }
    book
}

/// Runs the two-phase scheme once; returns the decoded message and the
/// stopping time.
pub fn run_han_sato<R: Rng + ?Sized>(
    channel: &SdDmc,
    si: SiModel,
    msg_bits: usize,
    n1: usize,
    message: u64,
    rng: &mut R,
) -> Result<(u64, usize)> {
    let plan = HanSatoPlan::new(channel, si, msg_bits, n1, 0, 0)?;
    let out = plan.send(message, rng, &mut Recorder::counting());
    Ok((out.decoded, out.tau))
}

/// A ready-to-run protocol.
#[derive(Debug, Clone)]
pub enum Protocol {
    Disprover(DisproverPlan),
    Theorem5(Theorem5Plan),
    HanSato(HanSatoPlan),
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Disprover(_) => "disprover",
            Protocol::Theorem5(_) => "theorem5",
            Protocol::HanSato(_) => "han-sato",
        }
    }

    pub fn message_bits(&self) -> usize {
        match self {
            Protocol::HanSato(p) => p.msg_bits,
            _ => 1,
        }
    }

    /// Draws a uniform message and runs the protocol once.
    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R, rec: &mut Recorder) -> Outcome {
        let message = rng.random_range(0..1u64 << self.message_bits());
        match self {
            Protocol::Disprover(p) => {
                let d = p.send(message == 1, rng, rec) as u64;
                Outcome {
                    message,
                    decoded: d,
                    tau: rec.slots(),
                    synchronized: true,
                    nack: false,
                }
            }
            Protocol::Theorem5(p) => {
                let (d, synchronized) = p.send(message == 1, rng, rec);
                Outcome {
                    message,
                    decoded: d as u64,
                    tau: rec.slots(),
                    synchronized,
                    nack: false,
                }
            }
            Protocol::HanSato(p) => p.send(message, rng, rec),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolStats {
    pub protocol: String,
    pub trials: usize,
    pub errors: usize,
    /// Trials where the encoder's stop decision disagreed with the decoder's.
    pub desyncs: usize,
    pub mean_tau: f64,
    /// Unbiased sample variance; 0 for a single trial.
    pub var_tau: f64,
    pub max_tau: usize,
    pub rate_bits_per_use: f64,
    /// Phase-1 decoding failures (two-phase scheme only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nacks: Option<usize>,
}

impl ProtocolStats {
    /// Standard error of `mean_tau`.
    pub fn std_error(&self) -> f64 {
        (self.var_tau / self.trials as f64).sqrt()
    }
}

/// Runs `trials` independent trials; trial `i` uses the stream
/// `(seed, TRIAL, i)`, so the result depends only on the seed.
pub fn monte_carlo(protocol: &Protocol, trials: usize, seed: u64) -> Result<ProtocolStats> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".to_owned()));
    }
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|i| protocol.run(&mut trial_rng(seed, i), &mut Recorder::counting()))
        .collect();

    let n = trials as f64;
    let mean = outcomes.iter().map(|o| o.tau as f64).sum::<f64>() / n;
    let var = if trials > 1 {
        outcomes.iter().map(|o| (o.tau as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(ProtocolStats {
        protocol: protocol.name().to_owned(),
        trials,
        errors: outcomes.iter().filter(|o| o.decoded != o.message || !o.synchronized).count(),
        desyncs: outcomes.iter().filter(|o| !o.synchronized).count(),
        mean_tau: mean,
        var_tau: var,
        max_tau: outcomes.iter().map(|o| o.tau).max().unwrap_or(0),
        rate_bits_per_use: protocol.message_bits() as f64 / mean,
        nacks: matches!(protocol, Protocol::HanSato(_)).then(|| outcomes.iter().filter(|o| o.nack).count()),
    })
}

/// Replays trial `index` of [`monte_carlo`] with recording on.
pub fn trace(protocol: &Protocol, seed: u64, index: usize) -> Trace {
    let mut rec = Recorder::recording();
    let out = protocol.run(&mut trial_rng(seed, index), &mut rec);
    Trace {
        slots: rec.records.unwrap_or_default(),
        message: out.message,
        decoded: out.decoded,
        tau: out.tau,
    }
}

fn trial_rng(seed: u64, index: usize) -> StreamRng {
    substream(seed, domain::TRIAL, index as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn deterministic_rows_are_deterministic() {
        let mut rng = substream(1, domain::TRIAL, 0);
        for _ in 0..100 {
            assert_eq!(step(&ch_triv(), 0, 0, &mut rng), 0);
            assert_eq!(step(&ch_ex2(), 0, 0, &mut rng), 1);
        }
    }

    #[test]
    fn step_frequency_matches_row() {
        let ch = ch_ex1(0.5);
        let mut rng = substream(3, domain::TRIAL, 0);
        let n = 100_000;
        let ones = (0..n).filter(|_| step(&ch, 1, 0, &mut rng) == 1).count();
        assert!((ones as f64 / n as f64 - 0.5).abs() < 0.005);
    }

    #[test]
    fn disprover_on_identity_takes_one_round() {
        let mut rng = substream(0, domain::TRIAL, 0);
        for bit in [false, true] {
            assert_eq!(run_disprover_bit(&identity(2), bit, &mut rng).unwrap(), (bit, 2));
        }
    }

    #[test]
    fn disprover_needs_a_zero() {
        let mut rng = substream(0, domain::TRIAL, 0);
        assert!(matches!(run_disprover_bit(&bsc(0.3), true, &mut rng), Err(Error::PrecondFailed(_))));
    }

    #[test]
    fn disprover_plan_on_averaged_example_one() {
        let plan = DisproverPlan::new(Link::Averaged(ch_ex1(0.5))).unwrap();
        assert_eq!((plan.x, plan.x_prime, plan.y), (0, 1, 1));
        assert_eq!(plan.success_probability(), 0.75);
    }

    #[test]
    fn theorem5_witnesses_and_rates() {
        let p = Theorem5Plan::new(&ch_ex1(0.5), StopRule::Relaxed).unwrap();
        assert_eq!((p.x, p.x_prime, p.y, p.group.clone()), (0, 1, 1, vec![0, 1]));
        assert_eq!(p.success_probability(), 0.75);
        let p = Theorem5Plan::new(&ch_ex2(), StopRule::Relaxed).unwrap();
        assert_eq!((p.x, p.x_prime, p.y, p.group.clone()), (0, 1, 0, vec![0]));
        assert_eq!(p.success_probability(), 0.5);
        let strict = Theorem5Plan::new(&ch_ex2(), StopRule::Strict).unwrap();
        assert_eq!(strict.success_probability(), 0.25);
        assert!(Theorem5Plan::new(&ch_ex3(0.3, 0.5), StopRule::Relaxed).is_err());
    }

    #[test]
    fn theorem5_strict_rule_is_also_zero_error() {
        let plan = Protocol::Theorem5(Theorem5Plan::new(&ch_ex2(), StopRule::Strict).unwrap());
        let stats = monte_carlo(&plan, 20_000, 5).unwrap();
        assert_eq!(stats.errors, 0);
        assert!((stats.mean_tau - 8.0).abs() < 4.0 * stats.std_error());
    }

    #[test]
    fn two_phase_on_noiseless_channel() {
        for k in 1..=4 {
            let plan = HanSatoPlan::new(&ch_triv(), SiModel::NONE, k, k, 9, 0).unwrap();
            let mut words = plan.codebook().to_vec();
            words.sort();
            words.dedup();
            assert_eq!(words.len(), 1 << k);
            let proto = Protocol::HanSato(plan);
            let stats = monte_carlo(&proto, 200, 1).unwrap();
            assert_eq!(stats.errors, 0);
            assert_eq!(stats.mean_tau, (k + 2) as f64);
            assert_eq!(stats.var_tau, 0.0);
            assert_eq!(stats.nacks, Some(0));
        }
    }

    #[test]
    fn two_phase_preconditions() {
        assert!(matches!(
            HanSatoPlan::new(&ch_ex3(0.3, 0.5), SiModel::NONE, 2, 4, 0, 0),
            Err(Error::PrecondFailed(_))
        ));
        assert!(HanSatoPlan::new(&ch_ex2(), SiModel::NONE_C, 2, 4, 0, 0).is_err());
        assert!(HanSatoPlan::new(&ch_triv(), SiModel::NONE, 0, 4, 0, 0).is_err());
        assert!(HanSatoPlan::new(&ch_triv(), SiModel::NONE, 17, 4, 0, 0).is_err());
    }

    #[test]
    fn two_phase_with_each_link() {
        for si in [SiModel::NONE, SiModel::C_NONE, SiModel::NC_NONE, SiModel::SC_C, SiModel::NC_NC] {
            let plan = HanSatoPlan::new(&ch_ex1(0.5), si, 3, 12, 2, 0).unwrap();
            let stats = monte_carlo(&Protocol::HanSato(plan), 500, 11).unwrap();
            assert_eq!(stats.errors, 0, "{si}");
        }
    }

    #[test]
    fn single_trial_has_zero_variance() {
        let proto = Protocol::Disprover(DisproverPlan::new(Link::Averaged(ch_ex1(0.5))).unwrap());
        let stats = monte_carlo(&proto, 1, 4).unwrap();
        assert_eq!(stats.var_tau, 0.0);
        assert!(monte_carlo(&proto, 0, 4).is_err());
    }

    #[test]
    fn same_seed_same_stats() {
        let proto = Protocol::Theorem5(Theorem5Plan::new(&ch_ex1(0.5), StopRule::Relaxed).unwrap());
        assert_eq!(monte_carlo(&proto, 5_000, 42).unwrap(), monte_carlo(&proto, 5_000, 42).unwrap());
        assert_ne!(monte_carlo(&proto, 5_000, 42).unwrap(), monte_carlo(&proto, 5_000, 43).unwrap());
    }

    #[test]
    fn trace_matches_the_trial() {
        let proto = Protocol::HanSato(HanSatoPlan::new(&ch_ex1(0.5), SiModel::NONE, 3, 10, 0, 0).unwrap());
        let t = trace(&proto, 7, 3);
        assert_eq!(t.slots.len(), t.tau);
        assert_eq!(t.message, t.decoded);
        assert_eq!(t.slots.last().unwrap().decision, Some(t.decoded));
        assert!(t.slots.iter().enumerate().all(|(i, s)| s.slot == i + 1));
        let lines = t.to_json_lines();
        assert_eq!(lines.lines().count(), t.tau + 1);
        assert!(lines.lines().last().unwrap().contains("\"type\":\"end\""));
    }

    #[test]
    fn state_inference_on_example_two() {
        let stats = simulate_state_inference(&ch_ex2(), 10_000, 1);
        assert_eq!(stats.correct, stats.slots);
        assert_eq!(infer_state(&ch_ex1(0.5), 0, 0), None);
    }
}
