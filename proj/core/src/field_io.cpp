#include "plap/field_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "plap/format.hpp"

namespace plap {

void write_field_csv(std::ostream& os, const Field& field) {
  const Grid& g = field.grid();
  const int m = g.n() + 2;
  os << "# grid dim=" << g.dim() << " L=" << format_double(g.length(0));
  if (g.dim() == 2) os << "x" << format_double(g.length(1));
  os << " n=" << g.n() << "\n";
  if (g.dim() == 1) {
    os << "x,u\n";
    for (int i = 0; i < m; ++i)
      os << format_double(g.coordinate(0, i)) << ","
         << format_double(field.at(i)) << "\n";
  } else {
    os << "x,y,u\n";
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        os << format_double(g.coordinate(0, i)) << ","
           << format_double(g.coordinate(1, j)) << ","
           << format_double(field.at(i, j)) << "\n";
  }
}

void write_field_csv(const std::filesystem::path& path, const Field& field) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  write_field_csv(os, field);
}

namespace {

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("field csv: bad " + what + " '" + s + "'");
  }
}

}  // namespace

Field read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# grid", 0) != 0)
    throw ConfigError("field csv: missing '# grid' header line");

  int dim = 0, n = 0;
  std::vector<double> lengths;
  std::istringstream hs(line.substr(6));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "dim") {
      dim = static_cast<int>(parse_number(val, "dim"));
    } else if (key == "n") {
      n = static_cast<int>(parse_number(val, "n"));
    } else if (key == "L") {
      std::istringstream ls(val);
      std::string part;
      while (std::getline(ls, part, 'x')) lengths.push_back(parse_number(part, "L"));
    }
  }
  Grid grid = [&] {
    try {
      return Grid::build(dim, lengths, n);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("field csv: ") + e.what());
    }
  }();

  Field field(grid);
  const int m = n + 2;
  const std::size_t expected = grid.node_count();
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == 'x') continue;  // column header
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    if (cols.size() != static_cast<std::size_t>(dim + 1))
      throw ConfigError("field csv: expected " + std::to_string(dim + 1) +
                        " columns in row " + std::to_string(row));
    if (row >= expected) throw ConfigError("field csv: too many rows");
    const int i = static_cast<int>(row % m);
    const int j = dim == 2 ? static_cast<int>(row / m) : 1;
    const double u = parse_number(cols.back(), "value");
    if (grid.is_boundary(i, j)) {
      if (u != 0.0)
        throw ConfigError("field csv: nonzero value on Dirichlet boundary");
    } else {
      field[grid.interior_index(i, j)] = u;
    }
    ++row;
  }
  if (row != expected)
    throw ConfigError("field csv: expected " + std::to_string(expected) +
                      " rows, got " + std::to_string(row));
  return field;
}

Field read_field_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open field file " + path.string());
  return read_field_csv(is);
}

}  // namespace plap
