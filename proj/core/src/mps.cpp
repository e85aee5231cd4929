#include "marchetype/mps.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace marchetype {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string write_mps(const StandardLP& lp, const std::string& name) {
  lp.validate();
  const Index W = lp.n_vars();
  const Index L = lp.n_rows();

  // Column-major view of the CSR matrix.
  std::vector<std::vector<std::pair<Index, double>>> columns(static_cast<std::size_t>(W));
  for (Index r = 0; r < L; ++r) {
    for (Index k = lp.constraints.row_offsets[static_cast<std::size_t>(r)];
         k < lp.constraints.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      columns[static_cast<std::size_t>(lp.constraints.col_indices[static_cast<std::size_t>(k)])]
          .push_back({r, lp.constraints.values[static_cast<std::size_t>(k)]});
    }
  }

  std::ostringstream out;
  out << "NAME " << name << "\n";
  out << "ROWS\n";
  out << " N OBJ\n";
  for (Index r = 0; r < L; ++r) out << " L R" << r << "\n";
  out << "COLUMNS\n";
  for (Index j = 0; j < W; ++j) {
    out << " X" << j << " OBJ " << num(lp.objective[static_cast<std::size_t>(j)]) << "\n";
    for (const auto& [row, value] : columns[static_cast<std::size_t>(j)]) {
      out << " X" << j << " R" << row << " " << num(value) << "\n";
    }
  }
  out << "RHS\n";
  for (Index r = 0; r < L; ++r) {
    if (lp.rhs[static_cast<std::size_t>(r)] != 0.0) {
      out << " RHS R" << r << " " << num(lp.rhs[static_cast<std::size_t>(r)]) << "\n";
    }
  }
  out << "BOUNDS\n";
  for (Index j = 0; j < W; ++j) {
    out << " UP BND X" << j << " 1\n";
    out << " LO BND X" << j << " 0\n";
  }
  out << "ENDATA\n";
  return out.str();
}

StandardLP read_mps(const std::string& text) {
  enum class Section { none, rows, columns, rhs, ranges, bounds, done };
  Section section = Section::none;

  std::string objective_row;
  // Row name -> (internal rows, sign); an E row expands to two internal rows.
  std::map<std::string, std::vector<std::pair<Index, double>>> row_map;
  Index n_internal_rows = 0;

  std::map<std::string, Index> col_map;
  std::vector<Triplet> triplets;
  DenseVector objective;
  DenseVector rhs;

  auto column_index = [&](const std::string& name) {
    auto it = col_map.find(name);
    if (it != col_map.end()) return it->second;
    Index j = static_cast<Index>(col_map.size());
    col_map.emplace(name, j);
    objective.push_back(0.0);
    return j;
  };

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && (line[0] == '*' || line[0] == '$')) continue;
    std::vector<std::string> tok = tokenize(line);
    if (tok.empty()) continue;

    if (line[0] != ' ' && line[0] != '\t') {
      const std::string& head = tok[0];
      if (head == "NAME") {
        continue;
      } else if (head == "ROWS") {
        section = Section::rows;
        continue;
      } else if (head == "COLUMNS") {
        section = Section::columns;
        continue;
      } else if (head == "RHS") {
        section = Section::rhs;
        continue;
      } else if (head == "RANGES") {
        section = Section::ranges;
        continue;
      } else if (head == "BOUNDS") {
        section = Section::bounds;
        continue;
      } else if (head == "ENDATA") {
        section = Section::done;
        break;
      } else if (head == "OBJSENSE" || head == "OBJSENSE:") {
        section = Section::none;
        continue;
      }
      throw std::invalid_argument("mps: unknown section '" + head + "'");
    }

    switch (section) {
      case Section::rows: {
        if (tok.size() != 2) throw std::invalid_argument("mps: malformed ROWS line");
        const std::string& type = tok[0];
        const std::string& rname = tok[1];
        if (type == "N") {
          if (objective_row.empty()) objective_row = rname;
          // later N rows are free rows; ignore their data
          else row_map[rname] = {};
        } else if (type == "L") {
          row_map[rname] = {{n_internal_rows++, 1.0}};
        } else if (type == "G") {
          row_map[rname] = {{n_internal_rows++, -1.0}};
        } else if (type == "E") {
          row_map[rname] = {{n_internal_rows, 1.0}, {n_internal_rows + 1, -1.0}};
          n_internal_rows += 2;
        } else {
          throw std::invalid_argument("mps: unsupported row type '" + type + "'");
        }
        break;
      }
      case Section::columns: {
        if (tok.size() < 3 || tok.size() % 2 == 0) {
          throw std::invalid_argument("mps: malformed COLUMNS line");
        }
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          throw std::invalid_argument("mps: integer markers are not supported");
        }
        Index j = column_index(tok[0]);
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          const std::string& rname = tok[f];
          double value = std::stod(tok[f + 1]);
          if (rname == objective_row) {
            objective[static_cast<std::size_t>(j)] = value;
            continue;
          }
          auto it = row_map.find(rname);
          if (it == row_map.end()) {
            throw std::invalid_argument("mps: unknown row '" + rname + "' in COLUMNS");
          }
          for (const auto& [r, sign] : it->second) {
            triplets.push_back({r, j, sign * value});
          }
        }
        break;
      }
      case Section::rhs: {
        if (tok.size() < 3 || tok.size() % 2 == 0) {
          throw std::invalid_argument("mps: malformed RHS line");
        }
        if (rhs.size() < static_cast<std::size_t>(n_internal_rows)) {
          rhs.assign(static_cast<std::size_t>(n_internal_rows), 0.0);
        }
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          auto it = row_map.find(tok[f]);
          if (it == row_map.end()) {
            if (tok[f] == objective_row) continue;  // objective offset ignored
            throw std::invalid_argument("mps: unknown row '" + tok[f] + "' in RHS");
          }
          double value = std::stod(tok[f + 1]);
          for (const auto& [r, sign] : it->second) {
            rhs[static_cast<std::size_t>(r)] = sign * value;
          }
        }
        break;
      }
      case Section::ranges:
        throw std::invalid_argument("mps: RANGES is not supported");
      case Section::bounds: {
        if (tok.size() < 4) throw std::invalid_argument("mps: malformed BOUNDS line");
        const std::string& btype = tok[0];
        Index j = column_index(tok[2]);
        double value = std::stod(tok[3]);
        (void)j;
        if (btype == "UP") {
          if (value != 1.0) {
            throw std::invalid_argument("mps: only the unit box is supported (UP must be 1)");
          }
        } else if (btype == "LO") {
          if (value != 0.0) {
            throw std::invalid_argument("mps: only the unit box is supported (LO must be 0)");
          }
        } else if (btype == "FX" || btype == "BV" || btype == "FR" || btype == "MI") {
          throw std::invalid_argument("mps: bound type '" + btype + "' is not supported");
        } else {
          throw std::invalid_argument("mps: unknown bound type '" + btype + "'");
        }
        break;
      }
      case Section::none:
      case Section::done:
        break;
    }
  }
  if (section != Section::done) {
    throw std::invalid_argument("mps: missing ENDATA");
  }

  StandardLP lp;
  if (rhs.size() < static_cast<std::size_t>(n_internal_rows)) {
    rhs.assign(static_cast<std::size_t>(n_internal_rows), 0.0);
  }
  lp.constraints =
      csr_from_triplets(n_internal_rows, static_cast<Index>(col_map.size()), std::move(triplets));
  lp.objective = std::move(objective);
  lp.rhs = std::move(rhs);
  lp.validate();
  return lp;
}

}  // namespace marchetype
