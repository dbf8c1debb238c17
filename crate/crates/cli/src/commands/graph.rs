use anyhow::Result;
use lvs_core::raster::load_mask;
use lvs_core::topology::build_graph;

use super::{collect_samples, ensure_dir, graph_params, process, write_json};
use crate::{Config, GraphArgs, Report};

pub fn run(args: &GraphArgs, config: &Config) -> Result<Report> {
    let params = graph_params(&args.graph, config)?;
    let (samples, failures) = collect_samples(&[args.mask.as_ref()], &[args.mask_dir.as_ref()])?;
    ensure_dir(&args.out_dir)?;
    let (_, report) = process(&samples, failures, |s| {
        let mask = load_mask(&s.paths[0])?;
        let graph = build_graph(&mask, &params);
        let out = args.out_dir.join(format!("{}.json", s.stem));
        write_json(&out, &graph.to_json())?;
        Ok(((), vec![out]))
    });
    Ok(report)
}
