#include "stf/harness/scene.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "stf/filter.hpp"
#include "stf/harness/test_textures.hpp"
#include "stf/image_io.hpp"

namespace stf {

using nlohmann::json;

void Scene::validate() const {
  if (!albedo) throw std::invalid_argument("scene: albedo texture missing");
  if (!(zoom >= 1.0)) throw std::invalid_argument("scene: zoom must be >= 1 (magnification only)");
  if (width < 1 || height < 1) throw std::invalid_argument("scene: resolution must be positive");
  if (normal_map && normal_map->channels() < 3) {
    throw std::invalid_argument("scene: normal map needs 3 channels");
  }
  wave.validate();
}

Vec2 Scene::lookup_point(const Texture& tex, Int2 pixel) const {
  const Vec2 uv{(pixel.x + 0.5) / (zoom * tex.width()) + uv_offset.x,
                (pixel.y + 0.5) / (zoom * tex.height()) + uv_offset.y};
  return uv_to_texel_space(uv, tex.width(), tex.height());
}

namespace {

AddressMode parse_address(const json& j, AddressMode fallback) {
  if (!j.contains("address_mode")) return fallback;
  const auto s = j.at("address_mode").get<std::string>();
  if (s == "clamp") return AddressMode::Clamp;
  if (s == "wrap") return AddressMode::Wrap;
  throw std::invalid_argument("scene: unknown address_mode " + s);
}

std::pair<int, int> parse_size(const json& j) {
  const json& s = j.at("size");
  if (s.is_array()) return {s.at(0).get<int>(), s.at(1).get<int>()};
  return {s.get<int>(), s.get<int>()};
}

std::shared_ptr<const Texture> parse_texture(const json& j, const std::filesystem::path& base,
                                             AddressMode mode) {
  if (j.is_string()) {
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = base / p;
    return std::make_shared<const Texture>(load_texture(p, mode));
  }
  mode = parse_address(j, mode);
  const auto kind = j.at("procedural").get<std::string>();
  const auto [w, h] = parse_size(j);
  const auto seed = j.value("seed", std::uint64_t{1});
  if (kind == "noise") {
    return std::make_shared<const Texture>(make_noise_texture(w, h, j.value("channels", 1), seed, mode));
  }
  if (kind == "checker") return std::make_shared<const Texture>(make_checker_texture(w, h, j.value("cell", 1), mode));
  if (kind == "ramp") return std::make_shared<const Texture>(make_ramp_texture(w, h, mode));
  if (kind == "constant") {
    return std::make_shared<const Texture>(
        Texture::constant(w, h, j.value("channels", 1), j.value("value", 0.5f), mode));
  }
  if (kind == "normals") {
    return std::make_shared<const Texture>(make_bumpy_normal_map(w, h, j.value("tilt", 0.5), seed, mode));
  }
  throw std::invalid_argument("scene: unknown procedural texture " + kind);
}

Vec3 parse_vec3(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

Scene parse_scene(std::string_view json_text, const std::filesystem::path& base_dir) {
  Scene scene;
  try {
    const json j = json::parse(json_text);
    const AddressMode mode = parse_address(j, AddressMode::Clamp);
    scene.albedo = parse_texture(j.at("albedo"), base_dir, mode);
    if (j.contains("normal_map") && !j.at("normal_map").is_null()) {
      scene.normal_map = parse_texture(j.at("normal_map"), base_dir, mode);
    }
    scene.zoom = j.value("zoom", 1.0);
    if (j.contains("uv_offset")) {
      scene.uv_offset = {j.at("uv_offset").at(0).get<double>(), j.at("uv_offset").at(1).get<double>()};
    }
    if (j.contains("resolution")) {
      scene.width = j.at("resolution").at(0).get<int>();
      scene.height = j.at("resolution").at(1).get<int>();
    }
    if (j.contains("wave")) scene.wave = {j.at("wave").at(0).get<int>(), j.at("wave").at(1).get<int>()};
    if (j.contains("shading")) {
      const json& s = j.at("shading");
      const auto type = s.value("type", std::string("albedo"));
      if (type == "albedo") {
        scene.shading.mode = ShadingMode::Albedo;
      } else if (type == "blinn_phong") {
        scene.shading.mode = ShadingMode::BlinnPhong;
        scene.shading.exponent = s.value("exponent", 32.0);
        if (s.contains("light_dir")) scene.shading.light_dir = parse_vec3(s.at("light_dir"));
        if (s.contains("view_dir")) scene.shading.view_dir = parse_vec3(s.at("view_dir"));
      } else {
        throw std::invalid_argument("scene: unknown shading type " + type);
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scene: malformed json: ") + e.what());
  }
  scene.validate();
  return scene;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str(), path.parent_path());
}

}  // namespace stf
