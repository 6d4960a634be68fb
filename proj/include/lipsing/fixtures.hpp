#pragma once

/**
 * Hand-built complexes and parametric point-cloud families used as ground
 * truth by the tests and by the CLI generators.
 */

#include "lipsing/homology.hpp"
#include "lipsing/metric_complex.hpp"

namespace lipsing::fixtures {

/// Regular n-gon of the given radius in the plane, as a closed polygon.
EmbeddedComplex regular_polygon(int n, double radius);
PointSet regular_polygon_points(int n, double radius);

/// Boundary of the octahedron with vertices +-e_i in R^3.
EmbeddedComplex octahedron();

/// Seven-vertex torus with triangles {i,i+1,i+3} and {i,i+2,i+3} mod 7,
/// embedded on a standard torus of revolution.
EmbeddedComplex seven_vertex_torus();

/// Torus of revolution (tube radius r, core radius R) sampled on a
/// `minor` x `major` grid, each quad split along one diagonal.
EmbeddedComplex torus_grid(int minor, int major, double r, double R);

/// Flat triangulated disk of the given radius with `rings` concentric rings.
EmbeddedComplex disk_mesh(int rings, double radius);

/// Antipodal quotient of the barycentric subdivision of the boundary of the
/// 4-dimensional cross-polytope: a triangulated real projective 3-space.
ChainComplex real_projective_3space();

/// Octahedron refined `levels` times by edge midpoints and projected to the
/// unit sphere.  The equator z = 0 stays a cycle of edges.
EmbeddedComplex geodesic_sphere(int levels);

/**
 * Planar family S_t: two unit circles tangent at the origin with the arcs
 * |y| < t near the origin replaced by the horizontal segments y = +-t.
 * At t = 0 this is the wedge of two circles, joined at the origin.
 * `per_circle` controls the sampling density of each circle.
 */
EmbeddedComplex pinched_circles(double t, int per_circle);

/**
 * Surface family obtained by revolving the planar family about the axis
 * x = -offset in the xy-plane: a torus at t > 0 degenerating to two tori
 * that touch along a circle at t = 0.
 */
EmbeddedComplex pinched_tori(double t, int per_circle, int around, double offset = 3.0);

/// Ordered profile points of the planar family (closed curve for t > 0; at
/// t = 0 the origin is listed once and both circles pass through it).
PointSet pinched_profile(double t, int per_circle);

}   // namespace lipsing::fixtures
