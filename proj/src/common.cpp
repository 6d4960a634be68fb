#include "lipsing/common.hpp"

#include <cmath>

namespace lipsing {

const char* to_string(Field field)
{
    return field == Field::Real ? "real" : "complex";
}

const char* to_string(Mode mode)
{
    return mode == Mode::Germ ? "germ" : "infinity";
}

Point random_unit_vector(std::mt19937_64& rng, int dim)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Point v(dim);
    do {
        for (int i = 0; i < dim; ++i)
            v[i] = gauss(rng);
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

double point_set_diameter(const PointSet& points)
{
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::max(best, (points[i] - points[j]).norm());
    return best;
}

}   // namespace lipsing
