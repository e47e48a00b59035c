use convex_cover::generators::{gen_ccheese, gen_cheese, gen_maze, CheeseParams, MazeParams};
use convex_cover::geom::{orientation, piece_contained, Orientation, PolygonWithHoles};
use convex_cover::instance::{verify_solution, Instance, Solution};
use convex_cover::triangulate::{steiner_points, triangulate, SteinerPolicy, TriangulationMesh};

fn check_mesh(mesh: &TriangulationMesh, region: &PolygonWithHoles) {
    assert_eq!(mesh.area(), region.area());
    assert_eq!(mesh.len(), mesh.euler_triangle_count());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let [a, b, c] = mesh.triangle_points(t);
        assert_eq!(orientation(a, b, c), Orientation::Ccw);
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            match mesh.adjacency[t][k] {
                Some(o) => {
                    let back = mesh.triangles[o].iter().position(|&x| x == v).unwrap();
                    assert_eq!(mesh.triangles[o][(back + 1) % 3], u);
                    assert_eq!(mesh.adjacency[o][back], Some(t));
                }
                None => assert!(mesh.is_constrained(u, v)),
            }
        }
    }
}

fn trivial_cover(inst: &Instance, mesh: &TriangulationMesh) -> Solution {
    Solution::from_pieces(inst.name.clone(), (0..mesh.len()).map(|t| mesh.triangle_polygon(t)).collect())
}

#[test]
fn random_cheese_area_and_structure() {
    for seed in 0..30 {
        let inst = if seed % 2 == 0 {
            gen_cheese(&CheeseParams::new(5 + seed as usize, seed)).unwrap()
        } else {
            gen_ccheese(&CheeseParams::new(5 + seed as usize, seed)).unwrap()
        };
        let mesh = triangulate(&inst.region, &[]).unwrap();
        check_mesh(&mesh, &inst.region);
        assert!(verify_solution(&inst, &trivial_cover(&inst, &mesh)).unwrap().is_valid());
    }
}

#[test]
fn triangles_are_contained() {
    let inst = gen_cheese(&CheeseParams::new(12, 99)).unwrap();
    let mesh = triangulate(&inst.region, &[]).unwrap();
    for t in 0..mesh.len() {
        assert!(piece_contained(&mesh.triangle_polygon(t), &inst.region));
    }
}

#[test]
fn steiner_meshes_tile() {
    for seed in 0..6 {
        let inst = gen_cheese(&CheeseParams::new(8, seed)).unwrap();
        for policy in [SteinerPolicy::EdgeExtensions, SteinerPolicy::ExtensionIntersections] {
            let extra = steiner_points(&inst.region, policy);
            let mesh = triangulate(&inst.region, &extra).unwrap();
            check_mesh(&mesh, &inst.region);
        }
    }
}

#[test]
fn mazes_tile() {
    for seed in 0..10 {
        let inst = gen_maze(&MazeParams::new(4, 3, seed)).unwrap();
        let mesh = triangulate(&inst.region, &[]).unwrap();
        check_mesh(&mesh, &inst.region);
        let extra = steiner_points(&inst.region, SteinerPolicy::ExtensionIntersections);
        let mesh = triangulate(&inst.region, &extra).unwrap();
        check_mesh(&mesh, &inst.region);
        assert!(verify_solution(&inst, &trivial_cover(&inst, &mesh)).unwrap().is_valid());
    }
}

#[test]
fn large_instance() {
    let inst = gen_cheese(&CheeseParams::new(400, 5)).unwrap();
    assert!(inst.vertex_count() > 1500);
    let mesh = triangulate(&inst.region, &[]).unwrap();
    check_mesh(&mesh, &inst.region);
}
