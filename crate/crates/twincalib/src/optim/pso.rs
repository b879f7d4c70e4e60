//! Swarm mechanics.
//!
//! The continuous part of a particle follows the classic velocity/position
//! update with per-dimension uniforms and a speed limit. The discrete part
//! is handled in one of two ways: standard PSO treats it as continuous and
//! relies on round-off at clamp time, while the mixed-variable variant
//! reproduces each discrete entry by picking among the particle's current
//! value, its personal best and the global best (weighted like the
//! inertia/cognitive/social terms), with a small mutation probability.
//!
//! Both steps use barrier semantics: every particle moves against the old
//! global best, all evaluations happen, then personal and global bests are
//! reduced. That makes results independent of evaluation order.

use rand::Rng;

use crate::rng::SeededRng;
use crate::space::{DimKind, MixedVector, SearchSpace};

use super::{EvalError, EvalFailure, PsoConfig};

#[derive(Debug, Clone)]
pub struct Particle {
    pub position: MixedVector,
    pub velocity: Vec<f64>,
    pub best_position: MixedVector,
    pub best_value: f64,
    pub(crate) rng: SeededRng,
}

impl Particle {
    pub fn new(position: MixedVector, velocity: Vec<f64>, rng: SeededRng) -> Self {
        Self {
            best_position: position.clone(),
            best_value: f64::INFINITY,
            position,
            velocity,
            rng,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Swarm {
    pub particles: Vec<Particle>,
    pub best_position: MixedVector,
    pub best_value: f64,
}

impl Swarm {
    /// Sample initial positions and velocities, evaluate every particle, and
    /// seed the personal/global bests. In mixed mode discrete velocity
    /// entries stay at zero because reproduction never integrates them.
    pub fn init<F>(
        space: &SearchSpace,
        cfg: &PsoConfig,
        objective: F,
        rng: &SeededRng,
        mixed: bool,
        failures: &mut Vec<EvalFailure>,
    ) -> Swarm
    where
        F: Fn(&MixedVector) -> Result<f64, EvalError>,
    {
        let root = rng.derive_label("particle");
        let mut particles = Vec::with_capacity(cfg.num_particles);
        for i in 0..cfg.num_particles {
            let mut prng = root.derive(i as u64);
            let position = space.sample_uniform(&mut prng);
            let velocity = space
                .dims()
                .iter()
                .map(|d| {
                    if mixed && d.kind == DimKind::Discrete {
                        0.0
                    } else {
                        let vmax = cfg.v_max_fraction * d.range();
                        if vmax == 0.0 {
                            0.0
                        } else {
                            prng.gen_range(-vmax..=vmax)
                        }
                    }
                })
                .collect();

            let mut particle = Particle::new(position, velocity, prng);
            match objective(&particle.position) {
                Ok(value) => particle.best_value = value,
                Err(err) => failures.push(EvalFailure {
                    iteration: 0,
                    detail: format!("particle {i}: {}", err.message),
                }),
            }
            particles.push(particle);
        }

        let mut swarm = Swarm {
            best_position: particles[0].best_position.clone(),
            best_value: f64::INFINITY,
            particles,
        };
        swarm.recompute_global_best();
        swarm
    }

    /// Global best = minimum personal best (ties keep the earliest particle).
    pub fn recompute_global_best(&mut self) {
        let mut best_idx = 0;
        for (i, p) in self.particles.iter().enumerate() {
            if p.best_value < self.particles[best_idx].best_value {
                best_idx = i;
            }
        }
        self.best_value = self.particles[best_idx].best_value;
        self.best_position = self.particles[best_idx].best_position.clone();
    }
}

fn clip_speed(v: f64, vmax: f64) -> f64 {
    v.clamp(-vmax, vmax)
}

#[allow(clippy::too_many_arguments)]
fn velocity_component(
    cfg: &PsoConfig,
    dim_range: f64,
    velocity: f64,
    position: f64,
    personal_best: f64,
    global_best: f64,
    r1: f64,
    r2: f64,
) -> f64 {
    let v = cfg.inertia * velocity
        + cfg.cognitive * r1 * (personal_best - position)
        + cfg.social * r2 * (global_best - position);
    clip_speed(v, cfg.v_max_fraction * dim_range)
}

/// Velocity update over all dimensions with per-dimension uniforms drawn
/// from `rng`, then clipped to the per-dimension speed limit.
pub fn velocity_update(
    cfg: &PsoConfig,
    space: &SearchSpace,
    particle: &Particle,
    global_best: &MixedVector,
    rng: &mut SeededRng,
) -> Vec<f64> {
    velocity_update_segment(cfg, space, particle, global_best, space.len(), rng)
}

/// Velocity update with injected uniforms; used by tests that pin `r1`/`r2`.
pub fn velocity_update_with(
    cfg: &PsoConfig,
    space: &SearchSpace,
    particle: &Particle,
    global_best: &MixedVector,
    r1: &[f64],
    r2: &[f64],
) -> Vec<f64> {
    assert_eq!(r1.len(), space.len());
    assert_eq!(r2.len(), space.len());
    space
        .dims()
        .iter()
        .enumerate()
        .map(|(d, dim)| {
            velocity_component(
                cfg,
                dim.range(),
                particle.velocity[d],
                particle.position[d],
                particle.best_position[d],
                global_best[d],
                r1[d],
                r2[d],
            )
        })
        .collect()
}

/// Velocity update on the first `dims` dimensions; entries beyond keep the
/// particle's previous velocity. The mixed-variable step uses this to leave
/// the discrete block untouched.
fn velocity_update_segment(
    cfg: &PsoConfig,
    space: &SearchSpace,
    particle: &Particle,
    global_best: &MixedVector,
    dims: usize,
    rng: &mut SeededRng,
) -> Vec<f64> {
    let mut velocity = particle.velocity.clone();
    for (d, dim) in space.dims().iter().enumerate().take(dims) {
        let r1: f64 = rng.gen();
        let r2: f64 = rng.gen();
        velocity[d] = velocity_component(
            cfg,
            dim.range(),
            particle.velocity[d],
            particle.position[d],
            particle.best_position[d],
            global_best[d],
            r1,
            r2,
        );
    }
    velocity
}

/// Move a particle by its fresh velocity and project back into the feasible
/// set (discrete entries round off at the clamp).
pub fn position_update(
    space: &SearchSpace,
    particle: &Particle,
    velocity: &[f64],
) -> MixedVector {
    let raw: Vec<f64> = particle
        .position
        .values()
        .iter()
        .zip(velocity)
        .map(|(x, v)| x + v)
        .collect();
    space
        .clamp(&MixedVector::new(raw))
        .expect("position and velocity share the space dimension")
}

fn pick_source(weights: [f64; 3], candidates: [f64; 3], u: f64) -> f64 {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return candidates[0];
    }
    let mut acc = 0.0;
    for (w, c) in weights.iter().zip(candidates) {
        acc += w / total;
        if u < acc {
            return c;
        }
    }
    candidates[2]
}

/// Reproduce the discrete block of a particle. Per dimension: mutate to a
/// uniform feasible value with probability `mutation_rate`, otherwise pick
/// among {current, personal best, global best} with probabilities
/// proportional to {w, c1*r1, c2*r2}.
pub fn discrete_reproduce(
    cfg: &PsoConfig,
    space: &SearchSpace,
    particle: &Particle,
    global_best: &MixedVector,
    rng: &mut SeededRng,
) -> Vec<f64> {
    let z = space.num_continuous();
    let l = space.num_discrete();
    let mut r1 = Vec::with_capacity(l);
    let mut r2 = Vec::with_capacity(l);
    for _ in 0..l {
        r1.push(rng.gen());
        r2.push(rng.gen());
    }
    discrete_segment(cfg, space, particle, global_best, z, &r1, &r2, rng)
}

/// [`discrete_reproduce`] with injected `r1`/`r2` (length = number of
/// discrete dimensions); mutation and source-selection draws still come
/// from `rng`.
pub fn discrete_reproduce_with(
    cfg: &PsoConfig,
    space: &SearchSpace,
    particle: &Particle,
    global_best: &MixedVector,
    r1: &[f64],
    r2: &[f64],
    rng: &mut SeededRng,
) -> Vec<f64> {
    discrete_segment(
        cfg,
        space,
        particle,
        global_best,
        space.num_continuous(),
        r1,
        r2,
        rng,
    )
}

#[allow(clippy::too_many_arguments)]
fn discrete_segment(
    cfg: &PsoConfig,
    space: &SearchSpace,
    particle: &Particle,
    global_best: &MixedVector,
    z: usize,
    r1: &[f64],
    r2: &[f64],
    rng: &mut SeededRng,
) -> Vec<f64> {
    space
        .dims()
        .iter()
        .enumerate()
        .skip(z)
        .map(|(d, dim)| {
            let j = d - z;
            let mutate: f64 = rng.gen();
            if mutate < cfg.mutation_rate {
                rng.gen_range(dim.lower as i64..=dim.upper as i64) as f64
            } else {
                let weights = [
                    cfg.inertia,
                    cfg.cognitive * r1[j],
                    cfg.social * r2[j],
                ];
                let candidates = [
                    particle.position[d],
                    particle.best_position[d],
                    global_best[d],
                ];
                pick_source(weights, candidates, rng.gen())
            }
        })
        .collect()
}

fn reduce_bests<F>(
    swarm: &mut Swarm,
    objective: F,
    iteration: usize,
    failures: &mut Vec<EvalFailure>,
) -> usize
where
    F: Fn(&MixedVector) -> Result<f64, EvalError>,
{
    // Barrier: evaluate every particle before touching any best.
    let results: Vec<Result<f64, EvalError>> = swarm
        .particles
        .iter()
        .map(|p| objective(&p.position))
        .collect();
    let evaluated = results.len();
    for (i, (particle, result)) in swarm.particles.iter_mut().zip(results).enumerate() {
        match result {
            Ok(value) => {
                if value < particle.best_value {
                    particle.best_value = value;
                    particle.best_position = particle.position.clone();
                }
            }
            Err(err) => failures.push(EvalFailure {
                iteration,
                detail: format!("particle {i}: {}", err.message),
            }),
        }
    }
    swarm.recompute_global_best();
    evaluated
}

/// One mixed-variable step: continuous block via velocity/position update,
/// discrete block via reproduction, recombined in encoding order, then the
/// barrier evaluation and best reduction. Returns evaluations consumed.
pub fn mvpso_step<F>(
    cfg: &PsoConfig,
    space: &SearchSpace,
    swarm: &mut Swarm,
    objective: F,
    iteration: usize,
    failures: &mut Vec<EvalFailure>,
) -> usize
where
    F: Fn(&MixedVector) -> Result<f64, EvalError>,
{
    let global_best = swarm.best_position.clone();
    let z = space.num_continuous();
    for particle in swarm.particles.iter_mut() {
        let mut rng = particle.rng.clone();
        let velocity = velocity_update_segment(cfg, space, particle, &global_best, z, &mut rng);
        let mut raw: Vec<f64> = particle.position.values().to_vec();
        for d in 0..z {
            raw[d] += velocity[d];
        }
        if space.num_discrete() > 0 {
            let discrete = discrete_reproduce(cfg, space, particle, &global_best, &mut rng);
            raw[z..].copy_from_slice(&discrete);
        }
        particle.velocity = velocity;
        particle.position = space
            .clamp(&MixedVector::new(raw))
            .expect("candidate has the space dimension");
        particle.rng = rng;
    }
    reduce_bests(swarm, objective, iteration, failures)
}

/// One standard-PSO step: velocity/position updates across every dimension,
/// with discrete feasibility restored by round-off at clamp time.
pub fn standard_pso_step<F>(
    cfg: &PsoConfig,
    space: &SearchSpace,
    swarm: &mut Swarm,
    objective: F,
    iteration: usize,
    failures: &mut Vec<EvalFailure>,
) -> usize
where
    F: Fn(&MixedVector) -> Result<f64, EvalError>,
{
    let global_best = swarm.best_position.clone();
    for particle in swarm.particles.iter_mut() {
        let mut rng = particle.rng.clone();
        let velocity =
            velocity_update_segment(cfg, space, particle, &global_best, space.len(), &mut rng);
        particle.position = position_update(space, particle, &velocity);
        particle.velocity = velocity;
        particle.rng = rng;
    }
    reduce_bests(swarm, objective, iteration, failures)
}
