use rand::Rng;

use dynperc::anatomy::{compare_stats, sample_stats, AnatomyComparison, AnatomyParams, GiantStats, Sampler};
use dynperc::coupling::{coalescence_tail_curve, CouplingStart};
use dynperc::estimators::{mixing_curve, EnvStart, MixingStart, MixingTarget, WalkerStart};
use dynperc::graph::sample_er;
use dynperc::oracle::{stationarity_residual, tv_distance, GeneratorSpec};
use dynperc::rng::{rng_for, SimRng, Stream};
use dynperc::sim::{uniform_pair, Environment, InitMode, System};
use dynperc::structure::{analyze, GoodGraphConstants};
use dynperc::Params;

use crate::output::{emit, resolve_out, write_atomic, write_curve, Meta};
use crate::{
    AnatomyArgs, CliError, CliResult, Command, CoupleArgs, InitArg, MixArgs, OracleArgs, SimulateArgs, StructureArgs,
    TargetArg,
};

pub fn dispatch(command: &Command) -> CliResult<()> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Structure(a) => structure(a),
        Command::Couple(a) => couple(a),
        Command::Mix(a) => mix(a),
        Command::Anatomy(a) => anatomy(a),
        Command::Oracle(a) => oracle(a),
    }
}

fn init_mode(init: InitArg) -> InitMode {
    match init {
        InitArg::Stationary => InitMode::Stationary,
        InitArg::AllOpen => InitMode::AllOpen,
        InitArg::AllClosed => InitMode::AllClosed,
    }
}

fn edge_list(env: &Environment) -> String {
    env.open_edges().iter().map(|(u, v)| format!("{u}-{v}")).collect::<Vec<_>>().join(" ")
}

fn simulate(a: &SimulateArgs) -> CliResult<()> {
    let params = Params::new(a.n, a.lambda, a.mu)?;
    if a.walkers == 0 {
        return Err(CliError::Config("--walkers must be positive".into()));
    }
    let mut start = rng_for(a.seed, 0, Stream::Start);
    let env = Environment::init(&params, &init_mode(a.init), &mut start)?;
    let walkers: Vec<usize> = (0..a.walkers).map(|_| start.random_range(0..a.n)).collect();
    let initial = edge_list(&env);
    let mut sys = System::new(params, env, walkers.clone(), rng_for(a.seed, 0, Stream::Main))?;
    sys.enable_log();
    sys.advance(a.t_max)?;
    let log = sys.take_log().expect("log enabled");
    let mut bytes = Meta::new("simulate", a, Some(a.seed))?.csv_header().into_bytes();
    let walkers_str: Vec<String> = walkers.iter().map(usize::to_string).collect();
    bytes.extend(format!("# initial_walkers: {}\n# initial_open_edges: {initial}\n", walkers_str.join(" ")).bytes());
    log.write_csv(&mut bytes)?;
    emit(a.io.out.as_deref(), &bytes)
}

fn structure(a: &StructureArgs) -> CliResult<()> {
    let constants = GoodGraphConstants { c_star: a.c_star, big_c_star: a.big_c_star, omega_star: a.omega };
    constants.validate()?;
    let params = Params::new(a.n, a.lambda, 0.0)?;
    let g = sample_er(a.n, params.p(), &mut rng_for(a.seed, 0, Stream::Environment));
    let report = analyze(&g, &constants, a.with_isolated)?;
    let bytes = Meta::new("structure", a, Some(a.seed))?.json_document(&report)?;
    emit(a.io.out.as_deref(), &bytes)
}

fn couple(a: &CoupleArgs) -> CliResult<()> {
    let params = Params::new(a.n, a.lambda, a.mu)?;
    if a.n < 3 {
        return Err(CliError::Config("couple needs n >= 3".into()));
    }
    // Stationary eta, xi differing in one uniform edge, independent uniform walkers.
    let sampler = |rng: &mut SimRng| {
        let eta0 = Environment::init(&params, &InitMode::Stationary, rng)?;
        let mut xi0 = eta0.clone();
        let (u, v) = uniform_pair(params.n(), rng);
        xi0.set_edge(u, v, !eta0.is_open(u, v));
        let x0 = rng.random_range(0..params.n());
        let y0 = rng.random_range(0..params.n());
        Ok(CouplingStart { x0, eta0, y0, xi0 })
    };
    let curve = coalescence_tail_curve(&params, sampler, &a.times, a.replicas, a.seed)?;
    let mut bytes = Meta::new("couple", a, Some(a.seed))?.csv_header().into_bytes();
    bytes.extend(write_curve(&curve)?);
    emit(a.io.out.as_deref(), &bytes)
}

fn mix(a: &MixArgs) -> CliResult<()> {
    let params = Params::new(a.n, a.lambda, a.mu)?;
    let target = match a.target {
        TargetArg::Walk => MixingTarget::Walk,
        TargetArg::FullSystem => MixingTarget::FullSystem,
        TargetArg::EnvironmentCount => MixingTarget::EnvironmentCount,
    };
    let env = match a.init {
        InitArg::Stationary => EnvStart::Stationary,
        InitArg::AllOpen => EnvStart::AllOpen,
        InitArg::AllClosed => EnvStart::AllClosed,
    };
    let walker = a.start_vertex.map_or(WalkerStart::Uniform, WalkerStart::Vertex);
    let curve = mixing_curve(&params, target, MixingStart { walker, env }, &a.times, a.replicas, a.seed)?;
    let mut bytes = Meta::new("mix", a, Some(a.seed))?.csv_header().into_bytes();
    bytes.extend(write_curve(&curve)?);
    emit(a.io.out.as_deref(), &bytes)
}

fn anatomy(a: &AnatomyArgs) -> CliResult<()> {
    let params = AnatomyParams::new(a.n, a.lambda)?;
    if a.replicas < 30 {
        return Err(CliError::Config(format!("--replicas must be at least 30, got {}", a.replicas)));
    }
    let left = sample_stats(Sampler::Anatomy, a.n, a.lambda, a.replicas, a.seed)?;
    let right = sample_stats(Sampler::ErdosRenyi, a.n, a.lambda, a.replicas, a.seed)?;
    let report = AnatomyComparison {
        n: a.n,
        lambda: a.lambda,
        theta: params.theta,
        replicas: a.replicas,
        gaps: compare_stats(&left, &right, a.seed),
    };
    let meta = Meta::new("anatomy", a, Some(a.seed))?;
    let stats_path = a.stats_out.clone().or_else(|| a.io.out.as_ref().map(|p| p.with_extension("csv")));
    if let Some(path) = stats_path {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(["sampler", "replica"].iter().chain(GiantStats::NAMES.iter()))?;
        for (name, set) in [("anatomy", &left), ("erdos_renyi", &right)] {
            for (replica, stats) in set.iter().enumerate() {
                let mut row = vec![name.to_string(), replica.to_string()];
                row.extend(stats.values().iter().map(|v| v.to_string()));
                w.write_record(&row)?;
            }
        }
        let mut bytes = meta.csv_header().into_bytes();
        bytes.extend(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?);
        write_atomic(&resolve_out(&path), &bytes)?;
    }
    emit(a.io.out.as_deref(), &meta.json_document(&report)?)
}

fn oracle(a: &OracleArgs) -> CliResult<()> {
    let params = Params::new(a.n, a.lambda, a.mu)?;
    let spec = GeneratorSpec::new(&params)?;
    let rep = stationarity_residual(&spec);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["quantity", "time", "value"])?;
    w.write_record(["stationarity_residual", "", &format!("{:?}", rep.residual)])?;
    w.write_record(["detailed_balance_error", "", &format!("{:?}", rep.detailed_balance)])?;
    let initial = spec.point_mass(0, 0);
    let pi = spec.stationary();
    for &t in &a.times {
        let law = spec.transient(&initial, t)?;
        w.write_record(["tv_to_stationary", &format!("{t:?}"), &format!("{:?}", tv_distance(&law, &pi))])?;
    }
    let mut bytes = Meta::new("oracle", a, None)?.csv_header().into_bytes();
    bytes.extend(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?);
    emit(a.io.out.as_deref(), &bytes)
}
