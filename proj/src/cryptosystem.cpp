#include "trs/cryptosystem.hpp"

#include <charconv>
#include <vector>

#include "trs/errors.hpp"

namespace trs {

namespace {

constexpr std::string_view kMagic = "TRS-MCELIECE v1 ";

[[noreturn]] void format_error(const std::string& what) {
  throw Error(Errc::format_error, what);
}

// Splits into lines; the text must end in exactly one newline.
std::vector<std::string_view> split_lines(std::string_view text) {
  if (text.empty() || text.back() != '\n') format_error("missing final newline");
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string header(std::string_view kind, const TrsParams& p) {
  return std::string(kMagic) + std::string(kind) + "\nq0=" + std::to_string(p.q0) +
         " n=" + std::to_string(p.n) + " k=" + std::to_string(p.k) +
         " l=" + std::to_string(p.l) + "\n";
}

std::uint64_t parse_uint(std::string_view s) {
  if (s.empty() || (s.size() > 1 && s[0] == '0')) format_error("malformed integer");
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) format_error("malformed integer");
  return v;
}

std::uint64_t parse_field(std::string_view tok, std::string_view name) {
  if (tok.substr(0, name.size()) != name || tok.size() <= name.size() ||
      tok[name.size()] != '=')
    format_error("expected " + std::string(name) + "=");
  return parse_uint(tok.substr(name.size() + 1));
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = line.find(' ', start);
    out.push_back(line.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

// Parses the two header lines and returns validated parameters.
TrsParams read_header(const std::vector<std::string_view>& lines, std::string_view kind) {
  if (lines.size() < 2) format_error("truncated header");
  if (lines[0] != std::string(kMagic) + std::string(kind))
    format_error("expected header '" + std::string(kMagic) + std::string(kind) + "'");
  auto tok = split_spaces(lines[1]);
  if (tok.size() != 4) format_error("malformed parameter line");
  const auto q0 = parse_field(tok[0], "q0");
  const auto n = parse_field(tok[1], "n");
  const auto k = parse_field(tok[2], "k");
  const auto l = parse_field(tok[3], "l");
  if (l > 64) format_error("l out of range");
  auto check = validate_params(q0, n, k, static_cast<unsigned>(l));
  if (!check.ok()) format_error("invalid parameters: " + check.violations.front());
  return *check.params;
}

Matrix read_matrix(const FieldTower& t, const std::vector<std::string_view>& lines,
                   std::size_t first, std::size_t rows, std::size_t cols) {
  Matrix m(t, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    Vec v = read_vector_line(t, lines[first + i], cols);
    std::copy(v.begin(), v.end(), m.row(i).begin());
  }
  return m;
}

std::string write_matrix(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) out += write_vector_line(m.tower(), m.row(i));
  return out;
}

}  // namespace

std::size_t PublicKey::size_bytes() const {
  return params.k * params.n * ((params.tower().degree() + 7) / 8);
}

KeyPair keygen(const TrsParams& params, Rng& rng) {
  const FieldTower& t = params.tower();
  TrsKey key{params, {}, {}};
  Vec pool = t.base_field_elements();
  if (params.n > pool.size()) throw Error(Errc::invalid_argument, "n exceeds q0");
  for (std::size_t i = 0; i < params.n; ++i)
    std::swap(pool[i], pool[i + uniform_below(rng, pool.size() - i)]);
  key.alpha.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(params.n));
  for (unsigned i = 1; i <= params.l; ++i) key.eta.push_back(t.sample_eta(i, rng));

  Matrix s(t, params.k, params.k);
  do {
    for (auto& x : s.data()) x = t.sample_subfield(t.levels(), rng);
  } while (linalg::rank(s) != params.k);

  PrivateKey sk{std::move(s), std::move(key)};
  PublicKey pk = public_from_private(sk);
  return {std::move(pk), std::move(sk)};
}

PublicKey public_from_private(const PrivateKey& sk) {
  return {sk.key.params, linalg::multiply(sk.s, trs_generator(sk.key))};
}

Vec encrypt(std::span<const Elem> m, const PublicKey& pk, Rng& rng) {
  const auto& p = pk.params;
  if (m.size() != p.k) throw Error(Errc::dimension_mismatch, "message length must be k");
  const FieldTower& t = p.tower();
  Vec y = linalg::multiply(m, pk.g_pub);
  std::vector<std::size_t> idx(p.n);
  for (std::size_t i = 0; i < p.n; ++i) idx[i] = i;
  const std::size_t w = error_weight(p.n, p.k);
  for (std::size_t i = 0; i < w; ++i) {
    std::swap(idx[i], idx[i + uniform_below(rng, p.n - i)]);
    Elem e;
    do e = t.sample_subfield(t.levels(), rng);
    while (e.is_zero());
    y[idx[i]] += e;
  }
  return y;
}

Decryptor::Decryptor(const PrivateKey& sk)
    : s_inv_(linalg::inverse(sk.s)), decoder_(sk.key) {}

Vec Decryptor::operator()(std::span<const Elem> y) const {
  auto mt = decoder_(y);
  if (!mt) throw Error(Errc::decryption_failure, "ciphertext is not within the decoding radius");
  return linalg::multiply(*mt, s_inv_);
}

Vec decrypt(std::span<const Elem> y, const PrivateKey& sk) { return Decryptor(sk)(y); }

// --- text formats -------------------------------------------------------------

std::string write_vector_line(const FieldTower& t, std::span<const Elem> v) {
  std::string out;
  out.reserve(v.size() * (t.hex_width() + 1));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += t.to_hex(v[i]);
  }
  out += '\n';
  return out;
}

Vec read_vector_line(const FieldTower& t, std::string_view line, std::size_t count) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  auto tok = split_spaces(line);
  if (count == 0 && line.empty()) return {};
  if (tok.size() != count)
    format_error("expected " + std::to_string(count) + " elements, found " +
                 std::to_string(tok.size()));
  Vec v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = t.from_hex(tok[i]);
  return v;
}

std::string write_public(const PublicKey& pk) {
  return header("public", pk.params) + write_matrix(pk.g_pub);
}

PublicKey read_public(std::string_view text) {
  auto lines = split_lines(text);
  TrsParams p = read_header(lines, "public");
  if (lines.size() != 2 + p.k) format_error("public key must have k rows");
  PublicKey pk{p, read_matrix(p.tower(), lines, 2, p.k, p.n)};
  if (linalg::rank(pk.g_pub) != p.k) format_error("public matrix is not of full rank");
  return pk;
}

std::string write_private(const PrivateKey& sk) {
  const FieldTower& t = sk.key.tower();
  return header("private", sk.key.params) + write_matrix(sk.s) +
         write_vector_line(t, sk.key.alpha) + write_vector_line(t, sk.key.eta);
}

PrivateKey read_private(std::string_view text) {
  auto lines = split_lines(text);
  TrsParams p = read_header(lines, "private");
  if (lines.size() != 2 + p.k + 2) format_error("private key must have k + 2 data lines");
  const FieldTower& t = p.tower();
  PrivateKey sk{read_matrix(t, lines, 2, p.k, p.k), TrsKey{p, {}, {}}};
  sk.key.alpha = read_vector_line(t, lines[2 + p.k], p.n);
  sk.key.eta = read_vector_line(t, lines[3 + p.k], p.l);
  try {
    check_key(sk.key);
  } catch (const Error& e) {
    format_error(std::string("inconsistent private key: ") + e.what());
  }
  if (linalg::rank(sk.s) != p.k) format_error("S is singular");
  return sk;
}

std::string write_ciphertext(const TrsParams& params, std::span<const Elem> y) {
  return header("ciphertext", params) + write_vector_line(params.tower(), y);
}

Ciphertext read_ciphertext(std::string_view text) {
  auto lines = split_lines(text);
  TrsParams p = read_header(lines, "ciphertext");
  if (lines.size() != 3) format_error("ciphertext must have one data line");
  return {p, read_vector_line(p.tower(), lines[2], p.n)};
}

}  // namespace trs
