//! Command-line front end. Every subcommand is a thin composition of
//! library operations; reports and graph documents are rendered by the
//! library and written verbatim, so identical inputs, flags and seeds
//! produce byte-identical output.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use semgraph::detect::{
    detect_with_relevance, shortest_path_subgraph, DetectConstraints, RelevanceFilter,
};
use semgraph::graph::{build_graph, validate, SemanticGraph};
use semgraph::ingest::{
    export_graph, import_graph, parse_links, parse_merge_map, parse_nodes, parse_ontology,
};
use semgraph::nullmodel::{
    er_random, predicted_projection_clustering, random_bipartite_with_mode, BipartiteMode,
    BipartiteParams, ACTOR_TYPE, ER_LINK_TYPE, ER_NODE_TYPE, MOVIE_TYPE,
};
use semgraph::ontology::OntologySchema;
use semgraph::relevance::{
    latent_links, link_type_relevance, node_relevance, pair_type_matrix, prune_node,
    relevance_outliers, RelevanceMode,
};
use semgraph::report::{
    detect_summary, render_degree_distributions, render_link_relevance,
    render_link_type_relevance, render_node_relevance, render_outliers, render_pair_type_matrix,
    render_path_matrix, render_removal_impact, render_type_stats, render_violations, ReportFormat,
};
use semgraph::stats::{
    degree_distribution, graph_clustering, graph_transitivity, path_length_matrix,
    type_removal_impact, type_stats_report, YrMode,
};
use semgraph::transform::{coarsen, one_mode_projection, projection_schema};

#[derive(Parser)]
#[command(name = "semgraph", version, about = "Typed-graph statistics, relevance scoring, scale transforms, null models and relationship detection", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Structured,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => ReportFormat::Table,
            FormatArg::Structured => ReportFormat::Structured,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum YrModeArg {
    Literal,
    Normalized,
}

impl From<YrModeArg> for YrMode {
    fn from(m: YrModeArg) -> Self {
        match m {
            YrModeArg::Literal => YrMode::Literal,
            YrModeArg::Normalized => YrMode::Normalized,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NodeModeArg {
    Plain,
    Semantic,
    #[value(name = "weak-2hop")]
    WeakTwoHop,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectModeArg {
    Plain,
    Semantic,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Bipartite,
    Er,
}

#[derive(Clone, Copy, ValueEnum)]
enum BipartiteModeArg {
    Independent,
    #[value(name = "poisson-degrees")]
    PoissonDegrees,
}

/// Graph input: either one canonical document or the schema/nodes/links
/// triple.
#[derive(Args)]
struct InputArgs {
    /// Canonical graph document (with [schema], [nodes], [links] sections)
    #[arg(long, value_name = "FILE", conflicts_with_all = ["ontology", "nodes", "links"])]
    graph: Option<PathBuf>,
    /// Schema file
    #[arg(long, value_name = "FILE", requires_all = ["nodes", "links"])]
    ontology: Option<PathBuf>,
    /// Node file
    #[arg(long, value_name = "FILE", requires_all = ["ontology", "links"])]
    nodes: Option<PathBuf>,
    /// Link file
    #[arg(long, value_name = "FILE", requires_all = ["ontology", "nodes"])]
    links: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Report every link and node that violates the schema
    Validate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Per-type connectivity and disparity report
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Normalization of the random disparity baseline
        #[arg(long = "yr-mode", value_enum, default_value = "literal")]
        yr_mode: YrModeArg,
    },
    /// Per-type degree histograms
    Dist {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Restrict to these node types (repeatable)
        #[arg(long = "node-type", value_name = "TYPE")]
        node_types: Vec<String>,
    },
    /// Mean shortest-path length per ordered type pair
    Paths {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Also report per-type removal impact on distances
        #[arg(long)]
        removal_impact: bool,
    },
    /// Node, link-type, outlier and latent-link relevance reports
    Relevance {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Usefulness threshold on the clustering value
        #[arg(long, default_value_t = 0.1)]
        tau: f64,
        /// Clustering flavor for node relevance
        #[arg(long, value_enum, default_value = "plain")]
        mode: NodeModeArg,
        /// Outlier deviation factor (type standard deviations)
        #[arg(long, default_value_t = 2.0)]
        z: f64,
        /// Also list non-adjacent pairs with relevance at least this
        #[arg(long = "min-s", value_name = "SCORE")]
        min_s: Option<f64>,
        /// Also print the linked-neighbor pair-type matrix of this node
        #[arg(long, value_name = "ID")]
        node: Option<String>,
    },
    /// Remove a node, recording it as an attribute of its former neighbors
    Prune {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Node to prune
        #[arg(long, value_name = "ID")]
        node: String,
        /// Attribute name for the recorded id (default: the node's type)
        #[arg(long, value_name = "NAME")]
        attr: Option<String>,
    },
    /// Aggregate node types through an old=new merge map
    Coarsen {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Merge-map file of old=new lines
        #[arg(long = "merge-map", value_name = "FILE")]
        merge_map: PathBuf,
    },
    /// One-mode projection of a bipartite graph
    Project {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Node type to keep
        #[arg(long, value_name = "TYPE")]
        keep: String,
        /// Node type to project over
        #[arg(long, value_name = "TYPE")]
        via: String,
    },
    /// Generate a seeded random graph, optionally project and measure it
    Nullmodel {
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum, default_value = "bipartite")]
        model: ModelArg,
        /// Kept-side node count (bipartite)
        #[arg(long, default_value_t = 1000)]
        na: usize,
        /// Other-side node count (bipartite)
        #[arg(long, default_value_t = 1000)]
        nm: usize,
        /// Mean memberships per kept node (bipartite)
        #[arg(long, default_value_t = 4.0)]
        mu: f64,
        /// Link-drawing mode (bipartite)
        #[arg(long = "bipartite-mode", value_enum, default_value = "independent")]
        bipartite_mode: BipartiteModeArg,
        /// Node count (er)
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Link probability (er)
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        /// Random seed (required: runs must be reproducible)
        #[arg(long)]
        seed: u64,
        /// Project the bipartite graph onto its kept side
        #[arg(long)]
        project: bool,
        /// Print measured clustering next to the closed-form prediction
        /// instead of the graph document
        #[arg(long)]
        stats: bool,
    },
    /// Union-of-shortest-paths subgraph between two nodes
    Detect {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_name = "ID")]
        source: String,
        #[arg(long, value_name = "ID")]
        target: String,
        /// Node types never traversed (repeatable)
        #[arg(long = "exclude-node-type", value_name = "TYPE")]
        exclude_node_types: Vec<String>,
        /// Link types never traversed (repeatable)
        #[arg(long = "exclude-link-type", value_name = "TYPE")]
        exclude_link_types: Vec<String>,
        /// Interior nodes with more neighbors than this are not traversed
        #[arg(long = "max-degree", value_name = "K")]
        max_degree: Option<usize>,
        /// Filter interior nodes by relevance before searching
        #[arg(long)]
        relevance: bool,
        /// Usefulness threshold for --relevance
        #[arg(long, default_value_t = 0.1)]
        tau: f64,
        /// Clustering flavor for --relevance
        #[arg(long = "relevance-mode", value_enum, default_value = "plain")]
        relevance_mode: DetectModeArg,
    },
}

enum CliError {
    Data(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Data(m) | CliError::Internal(m) => m,
        }
    }
}

fn data_err(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_input(input: &InputArgs) -> Result<(SemanticGraph, OntologySchema), CliError> {
    if let Some(doc) = &input.graph {
        let text = read_file(doc)?;
        return import_graph(&text)
            .map_err(|e| data_err(e.with_file(doc.display().to_string())));
    }
    match (&input.ontology, &input.nodes, &input.links) {
        (Some(o), Some(n), Some(l)) => {
            let schema = parse_ontology(&read_file(o)?)
                .map_err(|e| data_err(e.with_file(o.display().to_string())))?;
            let nodes = parse_nodes(&read_file(n)?)
                .map_err(|e| data_err(e.with_file(n.display().to_string())))?;
            let links = parse_links(&read_file(l)?)
                .map_err(|e| data_err(e.with_file(l.display().to_string())))?;
            let graph = build_graph(nodes, links, &schema).map_err(data_err)?;
            Ok((graph, schema))
        }
        _ => Err(CliError::Data(
            "provide --graph DOC or all of --ontology/--nodes/--links".into(),
        )),
    }
}

/// Provenance lines embedded at the top of every output. No timestamps:
/// identical invocations must produce identical bytes.
fn provenance() -> String {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    format!(
        "# semgraph {}\n# command: {}\n",
        env!("CARGO_PKG_VERSION"),
        argv.join(" ")
    )
}

fn write_output(output: &OutputArgs, body: &str) -> Result<(), CliError> {
    let text = format!("{}{body}", provenance());
    match &output.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { input, output } => {
            let (graph, schema) = load_input(&input)?;
            let violations = validate(&graph, &schema);
            write_output(&output, &render_violations(&violations))
        }
        Command::Stats {
            input,
            output,
            yr_mode,
        } => {
            let (graph, schema) = load_input(&input)?;
            let report = type_stats_report(&graph, &schema, yr_mode.into());
            write_output(&output, &render_type_stats(&report, output.format.into()))
        }
        Command::Dist {
            input,
            output,
            node_types,
        } => {
            let (graph, schema) = load_input(&input)?;
            let mut types: Vec<String> = if node_types.is_empty() {
                let mut all: Vec<String> = schema.node_types().map(str::to_string).collect();
                for t in graph.type_counts().keys() {
                    if !all.contains(t) {
                        all.push(t.clone());
                    }
                }
                all
            } else {
                node_types
            };
            types.sort();
            let dists: Vec<_> = types
                .iter()
                .map(|t| degree_distribution(&graph, t))
                .collect();
            write_output(
                &output,
                &render_degree_distributions(&dists, output.format.into()),
            )
        }
        Command::Paths {
            input,
            output,
            removal_impact,
        } => {
            let (graph, _) = load_input(&input)?;
            let matrix = path_length_matrix(&graph);
            let mut body = render_path_matrix(&matrix, output.format.into());
            if removal_impact {
                let impact = type_removal_impact(&graph);
                body.push('\n');
                body.push_str("[removal-impact]\n");
                body.push_str(&render_removal_impact(&impact, output.format.into()));
            }
            write_output(&output, &body)
        }
        Command::Relevance {
            input,
            output,
            tau,
            mode,
            z,
            min_s,
            node,
        } => {
            let (graph, schema) = load_input(&input)?;
            let format: ReportFormat = output.format.into();

            // weak-2hop scores against the plain-mode useful set
            let useful: HashSet<String> = match mode {
                NodeModeArg::WeakTwoHop => graph
                    .nodes()
                    .iter()
                    .filter(|n| {
                        node_relevance(&graph, &schema, &n.id, tau, RelevanceMode::Plain)
                            .map(|r| r.useful)
                            .unwrap_or(false)
                    })
                    .map(|n| n.id.clone())
                    .collect(),
                _ => HashSet::new(),
            };
            let mut rows = Vec::new();
            for n in graph.nodes() {
                let m = match mode {
                    NodeModeArg::Plain => RelevanceMode::Plain,
                    NodeModeArg::Semantic => RelevanceMode::Semantic,
                    NodeModeArg::WeakTwoHop => RelevanceMode::WeakTwoHop { useful: &useful },
                };
                rows.push(node_relevance(&graph, &schema, &n.id, tau, m).map_err(data_err)?);
            }
            rows.sort_by(|a, b| a.node.cmp(&b.node));

            let mut body = String::new();
            body.push_str("[nodes]\n");
            body.push_str(&render_node_relevance(&rows, format));
            body.push_str("\n[link-types]\n");
            body.push_str(&render_link_type_relevance(&link_type_relevance(&graph), format));
            body.push_str("\n[outliers]\n");
            body.push_str(&render_outliers(
                &relevance_outliers(&graph, z).map_err(data_err)?,
                format,
            ));
            if let Some(min_s) = min_s {
                body.push_str("\n[latent]\n");
                body.push_str(&render_link_relevance(
                    &latent_links(&graph, min_s, &schema).map_err(data_err)?,
                    format,
                ));
            }
            if let Some(id) = node {
                body.push_str("\n[pair-types]\n");
                body.push_str(&render_pair_type_matrix(
                    &pair_type_matrix(&graph, &id).map_err(data_err)?,
                    format,
                ));
            }
            write_output(&output, &body)
        }
        Command::Prune {
            input,
            output,
            node,
            attr,
        } => {
            let (graph, schema) = load_input(&input)?;
            let attr = match attr {
                Some(a) => a,
                None => graph.node(&node).map_err(data_err)?.node_type.clone(),
            };
            let pruned = prune_node(&graph, &node, &attr).map_err(data_err)?;
            write_output(&output, &export_graph(&pruned, &schema))
        }
        Command::Coarsen {
            input,
            output,
            merge_map,
        } => {
            let (graph, schema) = load_input(&input)?;
            let map = parse_merge_map(&read_file(&merge_map)?)
                .map_err(|e| data_err(e.with_file(merge_map.display().to_string())))?;
            let (coarse, coarse_schema) = coarsen(&graph, &schema, &map).map_err(data_err)?;
            write_output(&output, &export_graph(&coarse, &coarse_schema))
        }
        Command::Project {
            input,
            output,
            keep,
            via,
        } => {
            let (graph, _) = load_input(&input)?;
            let projected = one_mode_projection(&graph, &keep, &via).map_err(data_err)?;
            write_output(&output, &export_graph(&projected, &projection_schema(&keep, &via)))
        }
        Command::Nullmodel {
            output,
            model,
            na,
            nm,
            mu,
            bipartite_mode,
            n,
            p,
            seed,
            project,
            stats,
        } => {
            let (graph, schema, generator_line) = match model {
                ModelArg::Bipartite => {
                    let params = BipartiteParams {
                        actor_count: na,
                        movie_count: nm,
                        mean_actor_degree: mu,
                        seed,
                    };
                    let mode = match bipartite_mode {
                        BipartiteModeArg::Independent => BipartiteMode::IndependentLinks,
                        BipartiteModeArg::PoissonDegrees => BipartiteMode::PoissonDegrees,
                    };
                    let mode_name = match mode {
                        BipartiteMode::IndependentLinks => "independent",
                        BipartiteMode::PoissonDegrees => "poisson-degrees",
                    };
                    let nu = params.derived_movie_degree();
                    let line = format!(
                        "# generator: bipartite na={na} nm={nm} mu={mu} nu={nu} mode={mode_name} seed={seed}\n"
                    );
                    let graph = random_bipartite_with_mode(&params, mode).map_err(data_err)?;
                    let (graph, schema) = if project {
                        (
                            one_mode_projection(&graph, ACTOR_TYPE, MOVIE_TYPE)
                                .map_err(data_err)?,
                            projection_schema(ACTOR_TYPE, MOVIE_TYPE),
                        )
                    } else {
                        let mut s = OntologySchema::new();
                        s.declare_node_type(ACTOR_TYPE);
                        s.declare_node_type(MOVIE_TYPE);
                        s.declare_link_type(semgraph::nullmodel::MEMBERSHIP_LINK);
                        s.allow(ACTOR_TYPE, semgraph::nullmodel::MEMBERSHIP_LINK, MOVIE_TYPE)
                            .map_err(data_err)?;
                        (graph, s)
                    };
                    (graph, schema, line)
                }
                ModelArg::Er => {
                    if project {
                        return Err(CliError::Data(
                            "--project applies to the bipartite model only".into(),
                        ));
                    }
                    let line = format!("# generator: er n={n} p={p} seed={seed}\n");
                    let graph = er_random(n, p, seed).map_err(data_err)?;
                    (
                        graph,
                        OntologySchema::complete([ER_NODE_TYPE], ER_LINK_TYPE),
                        line,
                    )
                }
            };

            if stats {
                let clustering = graph_clustering(&graph).map_err(data_err)?;
                let transitivity = graph_transitivity(&graph).map_err(data_err)?;
                let mut body = generator_line;
                let _ = writeln!(body, "nodes: {}", graph.node_count());
                let _ = writeln!(body, "links: {}", graph.link_count());
                let _ = writeln!(body, "clustering: {clustering:.6}");
                let _ = writeln!(body, "transitivity: {transitivity:.6}");
                if matches!(model, ModelArg::Bipartite) && project {
                    let _ = writeln!(
                        body,
                        "predicted: {:.6}",
                        predicted_projection_clustering(mu)
                    );
                }
                write_output(&output, &body)
            } else {
                let body = format!("{generator_line}{}", export_graph(&graph, &schema));
                write_output(&output, &body)
            }
        }
        Command::Detect {
            input,
            output,
            source,
            target,
            exclude_node_types,
            exclude_link_types,
            max_degree,
            relevance,
            tau,
            relevance_mode,
        } => {
            let (graph, schema) = load_input(&input)?;
            let result = if relevance {
                let filter = match relevance_mode {
                    DetectModeArg::Plain => RelevanceFilter::Plain,
                    DetectModeArg::Semantic => RelevanceFilter::Semantic,
                };
                detect_with_relevance(&graph, &schema, &source, &target, tau, filter)
                    .map_err(data_err)?
            } else {
                let constraints = DetectConstraints {
                    excluded_node_types: exclude_node_types.into_iter().collect(),
                    excluded_link_types: exclude_link_types.into_iter().collect(),
                    max_degree,
                    ..DetectConstraints::default()
                };
                shortest_path_subgraph(&graph, &source, &target, &constraints).map_err(data_err)?
            };

            // internal consistency: the subgraph itself must reproduce the
            // reported distance
            if let Some(d) = result.distance {
                let within =
                    shortest_path_subgraph(&result.subgraph, &source, &target, &DetectConstraints::none())
                        .map_err(|e| CliError::Internal(e.to_string()))?;
                if within.distance != Some(d) {
                    return Err(CliError::Internal(format!(
                        "result subgraph has distance {:?}, expected {d}",
                        within.distance
                    )));
                }
            }

            let body = format!(
                "# detect: {}{}",
                detect_summary(&result),
                export_graph(&result.subgraph, &schema)
            );
            write_output(&output, &body)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap renders help to stdout and errors to stderr
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("semgraph: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
