#pragma once

// Fuel-indexed realization of the later modality and the lifting monad.
//
// A Delayed<A> is a possibly infinite tree: either Now(a), or Later(next) where
// `next` is a suspended Delayed<A>. Running with fuel n peels at most n Later
// nodes; each one peeled is one observable step.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>

namespace refstore::guarded {

using StepCount = std::uint64_t;
using Fuel = std::uint64_t;

template <class A>
class Delayed {
public:
    static Delayed now(A value) {
        auto n = std::make_shared<Node>();
        n->value.emplace(std::move(value));
        return Delayed(std::move(n));
    }

    static Delayed later(std::function<Delayed()> next) {
        auto n = std::make_shared<Node>();
        n->next = std::move(next);
        return Delayed(std::move(n));
    }

    bool isNow() const { return node_->value.has_value(); }
    const A &value() const { return *node_->value; }
    // The subtree under a Later node.
    Delayed force() const { return node_->next(); }

private:
    struct Node {
        std::optional<A> value;
        std::function<Delayed()> next;
    };
    explicit Delayed(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;
};

template <class A>
struct Converged {
    A value;
    StepCount steps;
};

struct Timeout {};

template <class A>
using Outcome = std::variant<Converged<A>, Timeout>;

template <class A>
bool converged(const Outcome<A> &o) {
    return std::holds_alternative<Converged<A>>(o);
}

template <class A>
Outcome<A> run(Delayed<A> d, Fuel fuel) {
    StepCount steps = 0;
    while (!d.isNow()) {
        if (fuel == 0) return Timeout{};
        --fuel;
        ++steps;
        d = d.force();
    }
    return Converged<A>{d.value(), steps};
}

template <class A>
Delayed<A> now(A value) {
    return Delayed<A>::now(std::move(value));
}

// One step of delay in front of `d`.
template <class A>
Delayed<A> delay(Delayed<A> d) {
    return Delayed<A>::later([d = std::move(d)] { return d; });
}

template <class A, class F>
auto bindDelayed(Delayed<A> d, F f) -> decltype(f(std::declval<const A &>())) {
    using R = decltype(f(std::declval<const A &>()));
    if (d.isNow()) return f(d.value());
    return R::later([d = std::move(d), f = std::move(f)] { return bindDelayed(d.force(), f); });
}

template <class A, class F>
auto mapDelayed(Delayed<A> d, F f) {
    using B = decltype(f(std::declval<const A &>()));
    return bindDelayed(std::move(d), [f = std::move(f)](const A &a) { return Delayed<B>::now(f(a)); });
}

template <class A, class B>
using Kleisli = std::function<Delayed<B>(const A &)>;

// Guarded fixed point: the result `r` satisfies r(a) = delay(h(r)(a)), so every
// unfolding of the recursion is paid for with exactly one step.
template <class A, class B>
class LobFix {
public:
    using Body = std::function<Kleisli<A, B>(Kleisli<A, B>)>;

    explicit LobFix(Body h) : h_(std::make_shared<const Body>(std::move(h))) {}

    Delayed<B> operator()(const A &a) const {
        auto h = h_;
        return Delayed<B>::later([h, a] { return (*h)(Kleisli<A, B>(LobFix(h)))(a); });
    }

private:
    explicit LobFix(std::shared_ptr<const Body> h) : h_(std::move(h)) {}
    std::shared_ptr<const Body> h_;
};

template <class A, class B>
Kleisli<A, B> lobFix(typename LobFix<A, B>::Body h) {
    return LobFix<A, B>(std::move(h));
}

}  // namespace refstore::guarded
