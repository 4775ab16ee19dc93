use std::fmt::Write;
use std::time::Instant;

use serde::Serialize;
use ssum_core::p4::solve_via_p4_detailed;
use ssum_core::repsolver::{solve_detailed, solve_with_space_budget, SolveReport, SolverConfig};
use ssum_core::sumset::{mitm_solve, schroeppel_shamir_solve};
use ssum_core::{brute_force_solve, Rng, Solution, SolveError, SubsetSumInstance};

use crate::config::{Algorithm, ExperimentConfig, Format};
use crate::CliError;

/// Constants the solver actually ran with.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub mu: f64,
    pub lambda0: f64,
    pub eps0: f64,
    pub blocks: usize,
    pub gamma: f64,
    pub repetitions: usize,
    pub crossover: usize,
    pub product_cap: usize,
    pub prime_scale: f64,
    pub residue_trials: usize,
    pub budget_exponent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Primes {
    pub p_l: u64,
    pub p_r: u64,
    pub p_prime: u64,
    pub x: u64,
    pub x_l: u64,
    pub x_r: u64,
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveRecord {
    pub algorithm: &'static str,
    pub preset: &'static str,
    pub seed: u64,
    pub n: usize,
    pub target: u128,
    pub answer: &'static str,
    pub witness: Option<Vec<usize>>,
    pub achieved_sum: Option<u128>,
    pub branch: Option<&'static str>,
    /// `(ε, ε_L, ε_R)` of the last mixer sample.
    pub mixer_epsilons: Option<[f64; 3]>,
    pub primes: Option<Primes>,
    /// `[|L1|, |L2|, |R1|, |R2|]` of the last main-lemma call.
    pub list_sizes: Option<[usize; 4]>,
    pub peak_payload: usize,
    pub repetitions: Option<usize>,
    pub main_lemma_calls: Option<usize>,
    pub high_indices: Option<usize>,
    pub subproblems: Option<usize>,
    pub wall_time_ms: Option<f64>,
    pub config: ConfigEcho,
}

fn echo(c: &SolverConfig, budget: Option<f64>) -> ConfigEcho {
    ConfigEcho {
        mu: c.mu,
        lambda0: c.lambda0,
        eps0: c.eps0,
        blocks: c.blocks,
        gamma: c.gamma,
        repetitions: c.repetitions,
        crossover: c.crossover,
        product_cap: c.product_cap,
        prime_scale: c.prime_scale,
        residue_trials: c.residue_trials,
        budget_exponent: budget,
    }
}

/// Runs the selected solver with a fresh `Rng::new(seed)`.
pub fn run_solve(config: &ExperimentConfig, instance: &SubsetSumInstance) -> Result<SolveRecord, CliError> {
    let cfg = config.solver_config()?;
    let mut rng = Rng::new(config.seed);
    let mut rec = SolveRecord {
        algorithm: config.algorithm.name(),
        preset: config.preset.name(),
        seed: config.seed,
        n: instance.n(),
        target: instance.target(),
        answer: "NO",
        witness: None,
        achieved_sum: None,
        branch: None,
        mixer_epsilons: None,
        primes: None,
        list_sizes: None,
        peak_payload: 0,
        repetitions: None,
        main_lemma_calls: None,
        high_indices: None,
        subproblems: None,
        wall_time_ms: None,
        config: echo(&cfg, config.budget_exponent),
    };
    let start = Instant::now();
    let solution = match config.algorithm {
        Algorithm::Bruteforce => {
            if instance.n() > 32 {
                return Err(SolveError::TooLarge { what: "n", value: instance.n(), limit: 32 }.into());
            }
            brute_force_solve(instance)
        }
        Algorithm::Mitm => {
            let out = mitm_solve(instance)?;
            rec.peak_payload = out.peak_payload;
            out.solution
        }
        Algorithm::Ss => {
            let out = schroeppel_shamir_solve(instance)?;
            rec.peak_payload = out.peak_payload;
            out.solution
        }
        Algorithm::Rep => fill(&mut rec, solve_detailed(&mut rng, instance, &cfg)?),
        Algorithm::RepP4 => fill(&mut rec, solve_via_p4_detailed(&mut rng, instance, &cfg)?),
        Algorithm::Budget => {
            let budget = config.budget_exponent.expect("checked by solver_config");
            let out = solve_with_space_budget(&mut rng, instance, budget, &cfg)?;
            rec.peak_payload = out.peak_payload;
            rec.high_indices = Some(out.high_indices);
            rec.subproblems = Some(out.subproblems);
            out.solution
        }
    };
    if config.timing {
        rec.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    if let Some(s) = solution {
        assert!(s.solves(instance), "solver returned a wrong subset");
        rec.answer = "YES";
        rec.witness = Some(s.subset.iter().collect());
        rec.achieved_sum = Some(s.achieved_sum);
    }
    Ok(rec)
}

fn fill(rec: &mut SolveRecord, report: SolveReport) -> Option<Solution> {
    let st = &report.stats;
    rec.branch = Some(report.branch.name());
    rec.mixer_epsilons = st.mixer_epsilons;
    rec.primes = st.residues.map(|r| Primes {
        p_l: r.p_l,
        p_r: r.p_r,
        p_prime: r.p_prime,
        x: r.x,
        x_l: r.x_l,
        x_r: r.x_r,
        fallback: r.prime_fallback,
    });
    rec.list_sizes = st.list_sizes;
    rec.peak_payload = st.peak_payload;
    rec.repetitions = Some(st.repetitions);
    rec.main_lemma_calls = Some(st.main_lemma_calls);
    report.solution
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), T::to_string)
}

fn joined<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

impl SolveRecord {
    pub const CSV_HEADER: &'static str = "algorithm,preset,seed,n,target,answer,witness,achieved_sum,branch,eps,eps_l,eps_r,\
p_l,p_r,p_prime,x,x_l,x_r,list_sizes,peak_payload,repetitions,main_lemma_calls,high_indices,subproblems,wall_time_ms";

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("record serializes") + "\n",
            Format::Csv => format!("{}\n{}\n", Self::CSV_HEADER, self.csv_row()),
            Format::Text => self.text(),
        }
    }

    pub fn csv_row(&self) -> String {
        let eps = self.mixer_epsilons.map_or([String::new(), String::new(), String::new()], |e| e.map(|x| format!("{x:.6}")));
        let pr = self.primes.as_ref();
        let field = |f: fn(&Primes) -> u64| pr.map_or(String::new(), |p| f(p).to_string());
        let cols = [
            self.algorithm.to_string(),
            self.preset.to_string(),
            self.seed.to_string(),
            self.n.to_string(),
            self.target.to_string(),
            self.answer.to_string(),
            self.witness.as_deref().map_or(String::new(), |w| joined(w, ";")),
            opt(&self.achieved_sum),
            opt(&self.branch),
            eps[0].clone(),
            eps[1].clone(),
            eps[2].clone(),
            field(|p| p.p_l),
            field(|p| p.p_r),
            field(|p| p.p_prime),
            field(|p| p.x),
            field(|p| p.x_l),
            field(|p| p.x_r),
            self.list_sizes.map_or(String::new(), |l| joined(&l, ";")),
            self.peak_payload.to_string(),
            opt(&self.repetitions),
            opt(&self.main_lemma_calls),
            opt(&self.high_indices),
            opt(&self.subproblems),
            self.wall_time_ms.map_or(String::new(), |t| format!("{t:.3}")),
        ];
        cols.join(",")
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            if !v.is_empty() {
                writeln!(s, "{k}: {v}").unwrap();
            }
        };
        line("algorithm", self.algorithm.into());
        line("preset", self.preset.into());
        line("seed", self.seed.to_string());
        line("n", self.n.to_string());
        line("target", self.target.to_string());
        line("answer", self.answer.into());
        line("witness", self.witness.as_deref().map_or(String::new(), |w| joined(w, " ")));
        line("achieved_sum", opt(&self.achieved_sum));
        line("branch", opt(&self.branch));
        line("mixer_epsilons", self.mixer_epsilons.map_or(String::new(), |e| joined(&e.map(|x| format!("{x:.6}")), " ")));
        if let Some(p) = &self.primes {
            line("primes", format!("p_L={} p_R={} p'={}{}", p.p_l, p.p_r, p.p_prime, if p.fallback { " (fallback)" } else { "" }));
            line("residues", format!("x={} x_L={} x_R={}", p.x, p.x_l, p.x_r));
        }
        line("list_sizes", self.list_sizes.map_or(String::new(), |l| joined(&l, " ")));
        line("peak_payload", self.peak_payload.to_string());
        line("repetitions", opt(&self.repetitions));
        line("main_lemma_calls", opt(&self.main_lemma_calls));
        line("high_indices", opt(&self.high_indices));
        line("subproblems", opt(&self.subproblems));
        line("wall_time_ms", self.wall_time_ms.map_or(String::new(), |t| format!("{t:.3}")));
        let c = &self.config;
        line(
            "config",
            format!(
                "mu={} lambda0={} eps0={} c={} gamma={} R={} crossover={} cap={} prime_scale={} residue_trials={}",
                c.mu, c.lambda0, c.eps0, c.blocks, c.gamma, c.repetitions, c.crossover, c.product_cap, c.prime_scale, c.residue_trials
            ),
        );
        s
    }
}
