use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use hilbert_roi::bench::{bench, random_windows, NaiveTable};
use hilbert_roi::core::{
    mask_to_ranges, order_for, ranges_to_mask, ranges_to_polygon, rasterize_polygon,
    AnnotationRecord, GridGeometry, IndexTable, PolygonGeom, QueryWindow, RangeSet,
};
use hilbert_roi::io::{self as hio, Format, RawPolygon};
use hilbert_roi::stats::{compute_stats, polygon_stats, CorpusStats};
use hilbert_roi::synth::{encode_corpus, synth_corpus, CorpusSpec};
use hilbert_roi::{index_file, Error, Result};

/// Hilbert-curve range encoding for image regions of interest.
#[derive(Parser)]
#[command(name = "hilbert-roi", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Polygon or bitmap -> Hilbert JSON.
    Encode {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Cap the number of ranges by merging the smallest gaps.
        #[arg(long)]
        max_ranges: Option<usize>,
        #[arg(long, default_value = "")]
        name: String,
        #[arg(long = "type", default_value = "")]
        class_label: String,
    },
    /// Hilbert JSON -> polygon text or bitmap.
    Decode {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Output format.
        #[arg(long, default_value = "wkt")]
        format: Format,
    },
    /// Any supported format -> any other.
    Convert {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Output format.
        #[arg(long)]
        format: Format,
        #[arg(long)]
        max_ranges: Option<usize>,
    },
    /// Build or query a range index.
    #[command(subcommand)]
    Index(IndexCmd),
    /// Generate a synthetic annotation container.
    Synth {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        max_ranges: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Vertex versus range storage statistics.
    Stats {
        /// Container to summarise; outlines are traced from the stored ranges.
        /// Without it a synthetic corpus is generated from the corpus flags.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        json: bool,
    },
    /// Time Hilbert window queries against a naive coordinate scan.
    Bench {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value_t = 100)]
        windows: usize,
        /// Window area as a fraction of the image.
        #[arg(long, default_value_t = 0.01)]
        window_fraction: f64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum IndexCmd {
    /// Container -> index file.
    Build {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the ids of annotations meeting a window or polygon, one per line.
    Query {
        index: PathBuf,
        /// minx,miny,maxx,maxy in pixels, inclusive.
        #[arg(long, value_parser = parse_window, conflicts_with = "polygon", required_unless_present = "polygon")]
        window: Option<QueryWindow>,
        /// Polygon file (WKT, GeoJSON or SVG).
        #[arg(long)]
        polygon: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
}

#[derive(Args)]
struct IoArgs {
    /// Input file, or `-` for standard input.
    input: PathBuf,
    /// Output file (default: standard output).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Input format (default: from extension or content).
    #[arg(long)]
    from: Option<Format>,
    /// Multiply polygon coordinates by this factor before snapping to pixels.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

#[derive(Args)]
struct GridArgs {
    /// Curve order k (grid of 2^k x 2^k cells).
    #[arg(long)]
    order: Option<u32>,
    /// Cell edge in pixels.
    #[arg(long, default_value_t = 1)]
    cell_size: u32,
    /// Image width in pixels (default: the grid extent).
    #[arg(long)]
    width: Option<u32>,
    #[arg(long)]
    height: Option<u32>,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 4096)]
    width: u32,
    #[arg(long, default_value_t = 4096)]
    height: u32,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// min,max blob radius in pixels.
    #[arg(long, default_value = "4,16", value_parser = parse_pair)]
    radius: (u32, u32),
    /// min,max vertices per blob.
    #[arg(long, default_value = "12,48", value_parser = parse_pair)]
    vertices: (u32, u32),
    #[arg(long, default_value_t = 1)]
    cell_size: u32,
    /// Curve order (default: smallest that covers the image).
    #[arg(long)]
    order: Option<u32>,
}

fn parse_pair(s: &str) -> std::result::Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected min,max")?;
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_window(s: &str) -> std::result::Result<QueryWindow, String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let [a, b, c, d] = v[..] else {
        return Err("expected minx,miny,maxx,maxy".into());
    };
    QueryWindow::new(a, b, c, d).map_err(|e| e.to_string())
}

impl GridArgs {
    fn geometry(&self) -> Result<GridGeometry> {
        match (self.order, self.width, self.height) {
            (Some(k), w, h) => {
                let extent = ((1u64 << k.min(31)) * u64::from(self.cell_size))
                    .min(u64::from(u32::MAX)) as u32;
                Ok(GridGeometry::with_image(
                    k,
                    self.cell_size,
                    w.unwrap_or(extent),
                    h.unwrap_or(extent),
                )?)
            }
            (None, Some(w), Some(h)) => Ok(order_for(w, h, self.cell_size)?),
            _ => usage("a grid is needed: pass --order, or --width and --height"),
        }
    }
}

impl CorpusArgs {
    fn spec(&self) -> CorpusSpec {
        CorpusSpec {
            image_width: self.width,
            image_height: self.height,
            polygon_count: self.count,
            seed: self.seed,
            blob_radius_range: self.radius,
            vertex_count_range: self.vertices,
        }
    }

    fn geometry(&self) -> Result<GridGeometry> {
        match self.order {
            Some(k) => Ok(GridGeometry::with_image(
                k,
                self.cell_size,
                self.width,
                self.height,
            )?),
            None => Ok(order_for(self.width, self.height, self.cell_size)?),
        }
    }
}

fn usage<T>(msg: &str) -> T {
    let _ = Cli::command()
        .error(clap::error::ErrorKind::MissingRequiredArgument, msg)
        .print();
    std::process::exit(1)
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        Ok(fs::read(path)?)
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn text(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| Error::Format(format!("input is not UTF-8: {e}")))
}

fn input_format(args: &IoArgs, bytes: &[u8]) -> Result<Format> {
    args.from
        .or_else(|| Format::from_extension(&args.input.to_string_lossy()))
        .or_else(|| Format::sniff(bytes))
        .ok_or_else(|| Error::Format("cannot tell the input format; pass --from".into()))
}

fn raw_polygon(fmt: Format, src: &str) -> Result<RawPolygon> {
    match fmt {
        Format::Wkt => hio::wkt::parse_wkt_raw(src),
        Format::GeoJson => hio::geojson::parse_geojson_raw(src),
        Format::Svg => hio::svg::parse_svg_raw(src),
        _ => unreachable!("not a polygon format"),
    }
}

/// Whatever the input is, as ranges on `geom`.
fn load_ranges(
    args: &IoArgs,
    fmt: Format,
    bytes: &[u8],
    geom: &GridGeometry,
) -> Result<AnnotationRecord> {
    let rs = match fmt {
        Format::HilbertJson => return hio::parse_hilbert_json(text(bytes)?, geom),
        Format::Pbm => mask_to_ranges(&hio::read_mask_pbm(bytes, geom)?),
        _ => {
            let poly = raw_polygon(fmt, text(bytes)?)?.quantize(args.scale)?;
            mask_to_ranges(&rasterize_polygon(&poly, geom)?)
        }
    };
    Ok(AnnotationRecord::new(0, "", "", rs, *geom)?)
}

fn emit_polygons(polys: &[PolygonGeom], fmt: Format) -> Result<String> {
    let mut out = String::new();
    for p in polys {
        let line = match fmt {
            Format::Wkt => hio::emit_wkt(p),
            Format::GeoJson => hio::emit_geojson_polygon(p),
            Format::Svg => hio::emit_svg(p)?,
            _ => unreachable!("not a polygon format"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

fn emit_ranges(rec: &AnnotationRecord, fmt: Format) -> Result<Vec<u8>> {
    Ok(match fmt {
        Format::HilbertJson => {
            let mut s = hio::emit_hilbert_json(rec);
            s.push('\n');
            s.into_bytes()
        }
        Format::Pbm => hio::write_mask_pbm(&ranges_to_mask(&rec.ranges, &rec.geometry)?)?,
        _ => emit_polygons(&ranges_to_polygon(&rec.ranges, &rec.geometry)?, fmt)?.into_bytes(),
    })
}

fn simplified(mut rec: AnnotationRecord, max: Option<usize>) -> Result<AnnotationRecord> {
    if let Some(m) = max {
        rec.ranges = rec.ranges.simplify(m)?;
    }
    Ok(rec)
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Encode {
            io,
            grid,
            max_ranges,
            name,
            class_label,
        } => {
            let bytes = read_input(&io.input)?;
            let fmt = input_format(&io, &bytes)?;
            let geom = grid.geometry()?;
            let mut rec = simplified(load_ranges(&io, fmt, &bytes, &geom)?, max_ranges)?;
            if fmt != Format::HilbertJson || !name.is_empty() {
                rec.name = name;
            }
            if fmt != Format::HilbertJson || !class_label.is_empty() {
                rec.class_label = class_label;
            }
            write_output(
                io.output.as_deref(),
                &emit_ranges(&rec, Format::HilbertJson)?,
            )
        }
        Cmd::Decode { io, grid, format } => {
            let bytes = read_input(&io.input)?;
            let geom = grid.geometry()?;
            let rec = hio::parse_hilbert_json(text(&bytes)?, &geom)?;
            write_output(io.output.as_deref(), &emit_ranges(&rec, format)?)
        }
        Cmd::Convert {
            io,
            grid,
            format,
            max_ranges,
        } => {
            let bytes = read_input(&io.input)?;
            let fmt = input_format(&io, &bytes)?;
            let out = if fmt.is_polygon() && format.is_polygon() && max_ranges.is_none() {
                // polygon to polygon keeps the exact outline
                let poly = raw_polygon(fmt, text(&bytes)?)?.quantize(io.scale)?;
                emit_polygons(&[poly], format)?.into_bytes()
            } else {
                let geom = grid.geometry()?;
                let rec = simplified(load_ranges(&io, fmt, &bytes, &geom)?, max_ranges)?;
                emit_ranges(&rec, format)?
            };
            write_output(io.output.as_deref(), &out)
        }
        Cmd::Index(IndexCmd::Build { input, output }) => {
            let (geom, records) = hio::read_container(BufReader::new(fs::File::open(&input)?))?;
            let table = IndexTable::build(geom, &records)?;
            index_file::save(&table, &output)?;
            eprintln!(
                "indexed {} annotations, {} ranges",
                table.annotation_count(),
                table.len()
            );
            Ok(())
        }
        Cmd::Index(IndexCmd::Query {
            index,
            window,
            polygon,
            scale,
        }) => {
            let table = index_file::load(&index)?;
            let ids = match (window, polygon) {
                (Some(w), _) => table.query_window(&w)?,
                (None, Some(p)) => {
                    let bytes = fs::read(&p)?;
                    let fmt = Format::from_extension(&p.to_string_lossy())
                        .or_else(|| Format::sniff(&bytes))
                        .filter(|f| f.is_polygon())
                        .ok_or_else(|| {
                            Error::Format("query polygon must be WKT, GeoJSON or SVG".into())
                        })?;
                    let poly = raw_polygon(fmt, text(&bytes)?)?.quantize(scale)?;
                    let rs: RangeSet = mask_to_ranges(&rasterize_polygon(&poly, table.geometry())?);
                    table.query_ranges(&rs)
                }
                (None, None) => unreachable!("clap requires one of --window/--polygon"),
            };
            let mut out = String::new();
            for id in ids {
                out.push_str(&id.to_string());
                out.push('\n');
            }
            write_output(None, out.as_bytes())
        }
        Cmd::Synth {
            corpus,
            max_ranges,
            output,
        } => {
            let geom = corpus.geometry()?;
            let polys = synth_corpus(&corpus.spec())?;
            let records = encode_corpus(&polys, &geom, max_ranges)?;
            match output {
                Some(p) => {
                    hio::write_container(io::BufWriter::new(fs::File::create(p)?), &geom, &records)
                }
                None => {
                    hio::write_container(io::BufWriter::new(io::stdout().lock()), &geom, &records)
                }
            }
        }
        Cmd::Stats {
            input,
            corpus,
            json,
        } => {
            let stats = match input {
                Some(p) => {
                    let (geom, records) = hio::read_container(BufReader::new(fs::File::open(&p)?))?;
                    let mut per = Vec::with_capacity(records.len());
                    for rec in &records {
                        let polys = ranges_to_polygon(&rec.ranges, &geom)?;
                        let mut s = hilbert_roi::stats::PolygonStats {
                            vertices: 0,
                            ranges: rec.ranges.len() as u64,
                            cells: rec.ranges.cell_count(),
                        };
                        for poly in &polys {
                            s.vertices += polygon_stats(poly, &geom)?.vertices;
                        }
                        per.push(s);
                    }
                    CorpusStats::from_polygons(&per, &geom)?
                }
                None => compute_stats(&synth_corpus(&corpus.spec())?, &corpus.geometry()?)?,
            };
            let out = if json {
                serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n"
            } else {
                stats.to_table()
            };
            write_output(None, out.as_bytes())
        }
        Cmd::Bench {
            corpus,
            windows,
            window_fraction,
            threads,
            json,
        } => {
            let geom = corpus.geometry()?;
            let records = encode_corpus(&synth_corpus(&corpus.spec())?, &geom, None)?;
            let table = IndexTable::build(geom, &records)?;
            let naive = NaiveTable::build(geom, &records)?;
            let ws = random_windows(&geom, windows, window_fraction, corpus.seed)?;
            let report = bench(&table, &naive, &ws, threads)?;
            let out = if json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                report.to_table()
            };
            write_output(None, out.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
