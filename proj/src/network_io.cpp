#include "sobnet/network_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sobnet/error.hpp"

namespace sobnet {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string next_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    return line;
  }
  throw Error("network file: unexpected end of input");
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw Error("network file: bad number '" + tok + "'");
  }
  return v;
}

std::vector<double> parse_row(const std::string& line, std::size_t expected) {
  std::istringstream ss(line);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(tok));
  if (out.size() != expected) {
    throw Error("network file: expected " + std::to_string(expected) + " values, got " +
                std::to_string(out.size()));
  }
  return out;
}

std::size_t expect_keyword(const std::string& line, const std::string& key) {
  std::istringstream ss(line);
  std::string k;
  long long v = -1;
  if (!(ss >> k >> v) || k != key || v < 0) {
    throw Error("network file: expected '" + key + " <count>', got '" + line + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

void write_network(std::ostream& out, const Network& net) {
  out << "sobnet-network 1\n";
  out << "input_dim " << net.input_dim() << "\n";
  out << "layers " << net.layers().size() << "\n";
  std::size_t idx = 1;
  for (const Layer& l : net.layers()) {
    out << "layer " << idx++ << " " << l.rows << " " << l.cols << "\n";
    for (std::size_t i = 0; i < l.rows; ++i) {
      for (std::size_t j = 0; j < l.cols; ++j) {
        out << (j ? " " : "") << format_double(l.weight(i, j));
      }
      out << "\n";
    }
    out << "bias";
    for (double b : l.bias) out << " " << format_double(b);
    out << "\n";
  }
}

Network read_network(std::istream& in) {
  if (next_line(in) != "sobnet-network 1") throw Error("network file: bad header");
  const std::size_t d = expect_keyword(next_line(in), "input_dim");
  const std::size_t count = expect_keyword(next_line(in), "layers");
  std::vector<Layer> layers;
  std::size_t cols_expected = d;
  for (std::size_t l = 0; l < count; ++l) {
    std::istringstream head(next_line(in));
    std::string key;
    std::size_t index = 0, rows = 0, cols = 0;
    if (!(head >> key >> index >> rows >> cols) || key != "layer" || index != l + 1) {
      throw Error("network file: bad layer header for layer " + std::to_string(l + 1));
    }
    if (cols != cols_expected) throw ShapeError("network file: layer width mismatch");
    Layer layer{rows, cols, {}, {}};
    for (std::size_t i = 0; i < rows; ++i) {
      const auto row = parse_row(next_line(in), cols);
      layer.weights.insert(layer.weights.end(), row.begin(), row.end());
    }
    std::string bias_line = next_line(in);
    if (bias_line.rfind("bias", 0) != 0) throw Error("network file: missing bias line");
    layer.bias = parse_row(bias_line.substr(4), rows);
    layers.push_back(std::move(layer));
    cols_expected = rows;
  }
  return Network(std::move(layers));
}

void save_network(const std::string& path, const Network& net) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_network(out, net);
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read_network(in);
}

}  // namespace sobnet
