//! Builds a structured triangulation and writes its text listing.
//!
//! cargo run --example mesh_dump -- [nx] [ny] [width] [height] > mesh.txt

use traction_split::mesh::{build_rect_mesh, mesh_size};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let nx: usize = args.first().map_or(Ok(4), |s| s.parse())?;
    let ny: usize = args.get(1).map_or(Ok(nx), |s| s.parse())?;
    let w: f64 = args.get(2).map_or(Ok(1.0), |s| s.parse())?;
    let h: f64 = args.get(3).map_or(Ok(1.0), |s| s.parse())?;

    let mesh = build_rect_mesh(nx, ny, [w, h])?;
    let (h_max, h_min) = mesh_size(&mesh);
    eprintln!(
        "{} vertices, {} triangles, {} boundary facets; h in [{h_min:.4}, {h_max:.4}], area {}, perimeter {}",
        mesh.n_vertices(),
        mesh.n_triangles(),
        mesh.boundary_facets.len(),
        mesh.area(),
        mesh.perimeter()
    );
    mesh.write_text(std::io::stdout().lock())?;
    Ok(())
}
