#include "dwork/core/context.hpp"

#include "dwork/core/normalize.hpp"

namespace dwork::core {

const char* morphism_kind_name(MorphismKind k) {
    switch (k) {
        case MorphismKind::Plain: return "plain";
        case MorphismKind::Projection: return "projection";
        case MorphismKind::ZeroSection: return "zero_section";
        case MorphismKind::Section: return "section";
        case MorphismKind::Factor: return "factor";
        case MorphismKind::Pairing: return "pairing";
        case MorphismKind::Negation: return "negation";
        case MorphismKind::BundleMap: return "bundle_map";
        case MorphismKind::Closed: return "closed";
        case MorphismKind::Open: return "open";
        case MorphismKind::Diagonal: return "diagonal";
        case MorphismKind::Graph: return "graph";
        case MorphismKind::ProductMap: return "product";
    }
    return "?";
}

bool MorphismInfo::closed_embedding() const {
    switch (kind) {
        case MorphismKind::ZeroSection:
        case MorphismKind::Section:
        case MorphismKind::Closed:
        case MorphismKind::Diagonal:
        case MorphismKind::Graph:
            return true;
        default:
            return false;
    }
}

CartesianFact CartesianFact::transposed() const {
    return {name, h, f, hp, fp};
}

namespace {

template <typename T>
const T* find_in(const std::vector<T>& v, const std::map<Name, std::size_t>& ix, const Name& n) {
    auto it = ix.find(n);
    return it == ix.end() ? nullptr : &v[it->second];
}

}  // namespace

const VarietyInfo* GeometryContext::variety(const Name& n) const { return find_in(varieties_, variety_ix_, n); }
const BundleInfo* GeometryContext::bundle(const Name& n) const { return find_in(bundles_, bundle_ix_, n); }
const ProductInfo* GeometryContext::product(const Name& n) const { return find_in(products_, product_ix_, n); }
const MorphismInfo* GeometryContext::morphism(const Name& n) const { return find_in(morphisms_, morphism_ix_, n); }
const SubvarietyInfo* GeometryContext::subvariety(const Name& n) const {
    return find_in(subvarieties_, subvariety_ix_, n);
}
const FunctionInfo* GeometryContext::function(const Name& n) const { return find_in(functions_, function_ix_, n); }
const ModuleInfo* GeometryContext::module(const Name& n) const { return find_in(modules_, module_ix_, n); }

bool GeometryContext::declared(SymbolSort sort, const Name& n) const {
    switch (sort) {
        case SymbolSort::Variety: return variety(n) != nullptr;
        case SymbolSort::Bundle: return bundle(n) != nullptr;
        case SymbolSort::Morphism: return morphism(n) != nullptr;
        case SymbolSort::Subvariety: return subvariety(n) != nullptr;
        case SymbolSort::Function: return function(n) != nullptr;
        case SymbolSort::Module: return module(n) != nullptr;
    }
    return false;
}

int GeometryContext::dim(const Name& v) const {
    const VarietyInfo* info = variety(v);
    if (!info) throw ContextError("undeclared variety '" + v + "'");
    return info->dim;
}

std::optional<Name> GeometryContext::dual_of(const Name& v) const {
    if (const BundleInfo* b = bundle(v)) return b->dual;
    if (variety(v)) return v;
    return std::nullopt;
}

const ProductInfo* GeometryContext::product_of(const Name& left, const Name& right,
                                               const std::optional<Name>& base) const {
    for (const auto& p : products_)
        if (p.left == left && p.right == right && p.base == base) return &p;
    return nullptr;
}

std::optional<int> GeometryContext::embedding_codim(const Name& m) const {
    const MorphismInfo* info = morphism(m);
    if (!info || !info->closed_embedding()) return std::nullopt;
    return dim(info->target) - dim(info->source);
}

void GeometryContext::require_variety(const Name& n, const std::string& what) const {
    if (!variety(n)) throw ContextError(what + ": undeclared variety '" + n + "'");
}

void GeometryContext::add_variety(const VarietyInfo& v) {
    if (variety(v.name)) throw ContextError("duplicate variety '" + v.name + "'");
    if (v.dim < 0) throw ContextError("negative dimension for '" + v.name + "'");
    variety_ix_[v.name] = varieties_.size();
    varieties_.push_back(v);
}

void GeometryContext::add_bundle(const Name& name, const Name& base, int rank, const std::optional<Name>& dual) {
    if (bundle(name)) throw ContextError("duplicate bundle '" + name + "'");
    require_variety(base, "bundle " + name);
    if (rank < 1) throw ContextError("bundle '" + name + "' must have positive rank");
    const VarietyInfo* b = variety(base);
    if (const VarietyInfo* existing = variety(name)) {
        if (existing->dim != b->dim + rank)
            throw ContextError("dimension inconsistency: bundle '" + name + "' of rank " + std::to_string(rank) +
                               " over " + base + " must have dimension " + std::to_string(b->dim + rank) +
                               ", declared " + std::to_string(existing->dim));
    } else {
        add_variety({name, b->dim + rank, b->smooth, b->reduced});
    }
    if (dual) {
        BundleInfo* d = nullptr;
        auto it = bundle_ix_.find(*dual);
        if (it != bundle_ix_.end()) d = &bundles_[it->second];
        if (!d) throw ContextError("dual of '" + name + "': undeclared bundle '" + *dual + "'");
        if (d->base != base || d->rank != rank)
            throw ContextError("dual bundles '" + name + "' and '" + *dual + "' differ in base or rank");
        if (d->dual && *d->dual != name)
            throw ContextError("bundle '" + *dual + "' already has dual '" + *d->dual + "'");
        d->dual = name;
    }
    bundle_ix_[name] = bundles_.size();
    bundles_.push_back({name, base, rank, dual});
}

void GeometryContext::add_product(const ProductInfo& p) {
    if (product(p.name)) throw ContextError("duplicate product '" + p.name + "'");
    require_variety(p.left, "product " + p.name);
    require_variety(p.right, "product " + p.name);
    int d = dim(p.left) + dim(p.right);
    bool smooth = variety(p.left)->smooth && variety(p.right)->smooth;
    if (p.base) {
        require_variety(*p.base, "product " + p.name);
        const BundleInfo* l = bundle(p.left);
        const BundleInfo* r = bundle(p.right);
        if (!l || !r || l->base != *p.base || r->base != *p.base)
            throw ContextError("fibre product '" + p.name + "' needs bundles over " + *p.base);
        d -= dim(*p.base);
    }
    if (product_of(p.left, p.right, p.base))
        throw ContextError("product of " + p.left + " and " + p.right + " declared twice");
    if (const VarietyInfo* existing = variety(p.name)) {
        if (existing->dim != d)
            throw ContextError("dimension inconsistency: product '" + p.name + "' must have dimension " +
                               std::to_string(d));
    } else {
        add_variety({p.name, d, smooth, true});
    }
    product_ix_[p.name] = products_.size();
    products_.push_back(p);
}

void GeometryContext::add_morphism(const MorphismInfo& m) {
    if (morphism(m.name)) throw ContextError("duplicate morphism '" + m.name + "'");
    require_variety(m.source, "morphism " + m.name);
    require_variety(m.target, "morphism " + m.name);
    const int ds = dim(m.source), dt = dim(m.target);
    auto bad = [&](const std::string& why) { throw ContextError("morphism '" + m.name + "': " + why); };
    switch (m.kind) {
        case MorphismKind::Plain:
            break;
        case MorphismKind::Projection: {
            const BundleInfo* b = bundle(m.source);
            if (!b || b->base != m.target) bad("projection must go from a bundle to its base");
            break;
        }
        case MorphismKind::ZeroSection:
        case MorphismKind::Section: {
            const BundleInfo* b = bundle(m.target);
            if (!b || b->base != m.source) bad("section must go from a base to a bundle over it");
            break;
        }
        case MorphismKind::Factor: {
            const ProductInfo* p = product(m.source);
            if (!p) bad("factor projection needs a declared product as source");
            if (m.factor != 1 && m.factor != 2) bad("factor index must be 1 or 2");
            if ((m.factor == 1 ? p->left : p->right) != m.target) bad("target is not the named factor");
            break;
        }
        case MorphismKind::Pairing: {
            const ProductInfo* p = product(m.source);
            const BundleInfo* line = bundle(m.target);
            if (!p || !p->base) bad("pairing needs a fibre product as source");
            const BundleInfo* l = bundle(p->left);
            if (!l || l->dual != p->right) bad("pairing source must be B x_X dual(B)");
            if (!line || line->rank != 1 || line->base != *p->base) bad("pairing target must be a line bundle over the base");
            break;
        }
        case MorphismKind::Negation:
            if (!bundle(m.source) || m.source != m.target) bad("negation must be a map from a bundle to itself");
            break;
        case MorphismKind::BundleMap: {
            const BundleInfo* a = bundle(m.source);
            const BundleInfo* b = bundle(m.target);
            if (!a || !b || a->base != b->base) bad("bundle map must go between bundles over one base");
            break;
        }
        case MorphismKind::Closed:
            if (m.codim && *m.codim != dt - ds)
                bad("codimension " + std::to_string(*m.codim) + " inconsistent with dimensions " + std::to_string(ds) +
                    " -> " + std::to_string(dt));
            if (dt < ds) bad("closed embedding into a smaller variety");
            break;
        case MorphismKind::Open:
            if (ds != dt) bad("open embedding must preserve dimension");
            break;
        case MorphismKind::Diagonal: {
            const ProductInfo* p = product(m.target);
            if (!p || p->base || p->left != m.source || p->right != m.source) bad("diagonal must map X into X x X");
            break;
        }
        case MorphismKind::Graph: {
            const ProductInfo* p = product(m.target);
            MorphismType t = morphism_type(*this, m.graph_of);
            if (t.source != m.source) bad("graph of a map with a different source");
            if (!p || p->base || p->left != m.source || p->right != t.target) bad("graph must map X into X x Y");
            break;
        }
        case MorphismKind::ProductMap: {
            const ProductInfo* s = product(m.source);
            const ProductInfo* t = product(m.target);
            if (!s || !t) bad("product map needs declared products as source and target");
            MorphismType a = morphism_type(*this, m.left);
            MorphismType b = morphism_type(*this, m.right);
            if (a.source != s->left || b.source != s->right || a.target != t->left || b.target != t->right)
                bad("components do not match the product factors");
            if (s->base != t->base) bad("products over different bases");
            break;
        }
    }
    if (m.transpose && m.kind != MorphismKind::BundleMap && m.kind != MorphismKind::Negation)
        bad("only bundle maps carry a transpose");
    morphism_ix_[m.name] = morphisms_.size();
    morphisms_.push_back(m);
}

void GeometryContext::add_subvariety(const SubvarietyInfo& s) {
    if (subvariety(s.name)) throw ContextError("duplicate subvariety '" + s.name + "'");
    require_variety(s.ambient, "subvariety " + s.name);
    if (s.image_of) {
        const MorphismInfo* j = morphism(*s.image_of);
        if (!j) throw ContextError("subvariety '" + s.name + "': undeclared morphism '" + *s.image_of + "'");
        if (!j->closed_embedding())
            throw ContextError("subvariety '" + s.name + "': '" + *s.image_of + "' is not a closed embedding");
        if (j->target != s.ambient)
            throw ContextError("subvariety '" + s.name + "': image of a map into " + j->target);
        const VarietyInfo* src = variety(j->source);
        if (s.smooth != src->smooth)
            throw ContextError("subvariety '" + s.name + "': smoothness differs from its source " + j->source);
    }
    subvariety_ix_[s.name] = subvarieties_.size();
    subvarieties_.push_back(s);
}

void GeometryContext::add_function(const FunctionInfo& f) {
    if (function(f.name)) throw ContextError("duplicate function '" + f.name + "'");
    require_variety(f.variety, "function " + f.name);
    if (f.coordinate) {
        const BundleInfo* b = bundle(f.variety);
        if (!b || b->rank != 1) throw ContextError("coordinate '" + f.name + "' needs a line bundle");
    }
    function_ix_[f.name] = functions_.size();
    functions_.push_back(f);
}

void GeometryContext::add_module(const ModuleInfo& m) {
    if (module(m.name)) throw ContextError("duplicate module '" + m.name + "'");
    require_variety(m.variety, "module " + m.name);
    module_ix_[m.name] = modules_.size();
    modules_.push_back(m);
}

void GeometryContext::add_cartesian(const CartesianFact& c) {
    for (const auto& other : cartesians_)
        if (other.name == c.name) throw ContextError("duplicate cartesian square '" + c.name + "'");
    MorphismType f = morphism_type(*this, c.f);
    MorphismType h = morphism_type(*this, c.h);
    MorphismType fp = morphism_type(*this, c.fp);
    MorphismType hp = morphism_type(*this, c.hp);
    auto bad = [&](const std::string& why) { throw ContextError("cartesian square '" + c.name + "': " + why); };
    if (f.target != h.target) bad("f and h must share a target");
    if (fp.target != h.source) bad("f' must land in the source of h");
    if (hp.target != f.source) bad("h' must land in the source of f");
    if (fp.source != hp.source) bad("f' and h' must share a source");
    MorphismExpr left = MorphismExpr::compose(c.f, c.hp);
    MorphismExpr right = MorphismExpr::compose(c.h, c.fp);
    if (!same_morphism(*this, left, right))
        bad("square does not commute: " + normalize_morphism(*this, left).render() +
            " vs " + normalize_morphism(*this, right).render());
    cartesians_.push_back(c);
}

void GeometryContext::add_identity(const MorphismIdentity& i) {
    MorphismType a = morphism_type(*this, i.lhs);
    MorphismType b = morphism_type(*this, i.rhs);
    if (a.source != b.source || a.target != b.target)
        throw ContextError("identity between morphisms of different types: " + i.lhs.render() + " and " + i.rhs.render());
    m_ids_.push_back(i);
}

void GeometryContext::add_identity(const FunctionIdentity& i) {
    if (function_variety(*this, i.lhs) != function_variety(*this, i.rhs))
        throw ContextError("identity between functions on different varieties");
    f_ids_.push_back(i);
}

void GeometryContext::add_identity(const SubvarietyIdentity& i) {
    if (subvariety_ambient(*this, i.lhs) != subvariety_ambient(*this, i.rhs))
        throw ContextError("identity between subvarieties of different varieties");
    s_ids_.push_back(i);
}

void GeometryContext::finalize() {
    for (auto& m : morphisms_) {
        if (!m.transpose) continue;
        const MorphismInfo* t = morphism(*m.transpose);
        if (!t) throw ContextError("morphism '" + m.name + "': undeclared transpose '" + *m.transpose + "'");
        auto ds = dual_of(m.source), dt = dual_of(m.target);
        if (!ds || !dt || t->source != *dt || t->target != *ds)
            throw ContextError("morphism '" + m.name + "': transpose '" + t->name + "' has the wrong type");
        if (t->transpose && *t->transpose != m.name)
            throw ContextError("morphisms '" + m.name + "' and '" + t->name + "' disagree on transposes");
    }
    for (auto& m : morphisms_) {
        if (!m.transpose) continue;
        auto it = morphism_ix_.find(*m.transpose);
        MorphismInfo& t = morphisms_[it->second];
        if (!t.transpose) t.transpose = m.name;
    }
}

}  // namespace dwork::core
