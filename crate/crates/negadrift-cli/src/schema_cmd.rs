//! `schema`: documentation of output formats, printed as plain text.

pub const SCHEMA_TEXT: &str = r#"negadrift output formats
========================

Numbers
-------
Floats are serialized with 17 significant digits ("%.16e"), which
round-trips f64 exactly. Non-finite values appear as the strings
"inf", "-inf", "nan" (quoted in JSON, bare in CSV). Log-space fields
(ln_*) are always present; decimal renderings are attached only when
they fit an f64.

Exit codes
----------
0  success
2  rejected input: usage error, schema violation, or a bound
   precondition that does not hold (a JSON error record explains which)
1  internal error (I/O and similar)

Error records (stderr, one JSON object per line)
------------------------------------------------
{"error":KIND,"message":TEXT} with KIND one of
"usage" | "schema" | "argument" | "precondition" | "io".

bound * (stdout or --out, one JSON object per line)
---------------------------------------------------
Common fields:
  op              subcommand name
  ln_e_t_term     log of the leading term: E[T] >= exp(ln_e_t_term) - 1/2
  e_t_lower       exp(ln_e_t_term) - 1/2, when representable
  lambda_e_t_lower  lambda * e_t_lower (fitness-evaluation bound), when
                  representable
  ln_pr_raw       unclamped log of the Pr[T < L] bound
  ln_pr_clamped   min(0, ln_pr_raw)
  pr_upper        exp(ln_pr_clamped), always in [0, 1]
Plus the calculator's constants under their conventional names:
  lemma1:    delta, Delta, M, L
  psm:       kappa, a, b, alpha, delta, D, lambda, L
  sbm:       n, p, alpha, delta, a, b, lambda, L, epsilon, B, b_tilde,
             kappa, D
  corollary: n, p, alpha, gamma, delta, a, b, kappa, lambda, L
  mixed:     n, alpha, delta, B, kappa, b_tilde, eq6_lhs, eq6_rhs, a, b,
             lambda, L, D (plus gamma when derived from --gamma)
  simple-ga: alpha, gamma, b, s

simulate (stdout or --out, CSV)
-------------------------------
t,min_g,log_potential,hit
  t              iteration index (0 = initial population)
  min_g          smallest Hamming distance to the target in the population
  log_potential  ln sum_i exp(-kappa g_i) at the --kappa scale
  hit            true once min_g <= a

experiment hitting-time
-----------------------
Per-replicate CSV (to --out when given, else stdout):
rep,seed,hit,t_hit,iterations
  rep         replicate index
  seed        derived per-replicate seed
  hit         true iff T < L in this replicate
  t_hit       hitting time when hit, empty otherwise
  iterations  iterations executed (min(T, L-1))
With --out, a summary JSON record goes to stdout:
  {"op":"hitting-time","reps",...,"L",...,"hits",...,"censored",...,
   "empirical_pr_hit",...,"master_seed",...[,"mean_uncensored",...]}

verify * (stdout or --out, one JSON object per line)
----------------------------------------------------
conditions:     per-level records {check:"condition_ii",level,ln_mgf,
                ln_threshold,margin,holds}, one
                {check:"condition_iii",...} record, and a summary.
drift:          per-population records {check:"drift",population,current,
                mean_next,half_width,rhs,ok} plus a summary.
domination:     verdict records {holds,worst_gap,worst_index,method,...};
                exact sweeps emit only violations plus a summary.
lemma1-oracle:  one record per accepted chain {check:"lemma1-oracle",
                chain,states,delta,Delta,M,pr_ok,worst_pr_margin,
                e_t_kind,e_t_value,e_t_bound,e_t_ok} plus a summary with
                the violation count.

sweep * (stdout or --out, CSV)
------------------------------
One record per Cartesian grid point, including rejected points:
  <input columns per subcommand>,status,reason,ln_e_t_term,e_t_lower,
  lambda_e_t_lower,ln_pr_raw,ln_pr_clamped,pr_upper
status is "ok" or "rejected"; reason carries the rejection message.
(simple-ga sweeps report alpha,gamma,b,s instead of bound columns.)

Configuration
-------------
Commands accepting --config read a flat JSON object whose keys mirror
the long flags (dashes become underscores, L/M/D/B/Delta stay
capitalized); explicit flags override file values; unknown keys are
schema violations. Stochastic commands require a master seed from
--seed, the config, or the NEGADRIFT_SEED environment variable.
"#;
