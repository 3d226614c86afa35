#pragma once

#include <sstream>
#include <string>

#include "crx/minj/ast.hpp"

namespace crx::minj {

// Canonical source renderer. parse(pretty_print(p)) is structurally equal to
// p for every well-formed program, which the test suite pins as a property.
class Printer {
 public:
  std::string render(const Program& prog) {
    std::ostringstream out;
    if (!prog.module.empty()) out << "module " << prog.module << ";\n\n";
    bool first = true;
    for (const ClassDecl& cls : prog.classes) {
      if (!first) out << "\n";
      first = false;
      render_class(out, cls);
    }
    return out.str();
  }

  void render_class(std::ostream& out, const ClassDecl& cls) {
    out << "class " << cls.name;
    if (cls.super_name) out << " extends " << *cls.super_name;
    out << " {\n";
    for (const FieldDecl& f : cls.fields) out << "  " << f.type_name << " " << f.name << ";\n";
    for (const MethodDecl& m : cls.methods) {
      out << "  " << m.name << "(";
      for (size_t i = 0; i < m.params.size(); ++i) {
        if (i) out << ", ";
        out << m.params[i];
      }
      out << ") {\n";
      render_body(out, *m.body, 4);
      out << "  }\n";
    }
    out << "}\n";
  }

  // Sequences print one item per line; everything else is a single line.
  void render_body(std::ostream& out, const Expr& body, int indent) {
    std::string pad(static_cast<size_t>(indent), ' ');
    if (const auto* seq = std::get_if<Seq>(&body.node)) {
      for (size_t i = 0; i < seq->items.size(); ++i) {
        out << pad;
        render_expr(out, *seq->items[i], PREC_SIMPLE);
        if (i + 1 < seq->items.size()) out << ";";
        out << "\n";
      }
    } else {
      out << pad;
      render_expr(out, body, PREC_SEQ);
      out << "\n";
    }
  }

  std::string render_expr(const Expr& e) {
    std::ostringstream out;
    render_expr(out, e, PREC_SEQ);
    return out.str();
  }

 private:
  // Loosest to tightest: seq, simple (assignment rhs level), equality,
  // additive, postfix.
  static constexpr int PREC_SEQ = 0;
  static constexpr int PREC_SIMPLE = 1;
  static constexpr int PREC_EQ = 2;
  static constexpr int PREC_ADD = 3;
  static constexpr int PREC_POSTFIX = 4;

  void render_expr(std::ostream& out, const Expr& e, int context) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            out << x.value;
          } else if constexpr (std::is_same_v<T, StrLit>) {
            out << '"';
            for (char c : x.value) {
              switch (c) {
                case '"': out << "\\\""; break;
                case '\\': out << "\\\\"; break;
                case '\n': out << "\\n"; break;
                case '\t': out << "\\t"; break;
                default: out << c;
              }
            }
            out << '"';
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            out << (x.value ? "true" : "false");
          } else if constexpr (std::is_same_v<T, NullLit>) {
            out << "null";
          } else if constexpr (std::is_same_v<T, Var>) {
            out << x.name;
          } else if constexpr (std::is_same_v<T, This>) {
            out << "this";
          } else if constexpr (std::is_same_v<T, FieldGet>) {
            render_expr(out, *x.target, PREC_POSTFIX);
            out << "." << x.field;
          } else if constexpr (std::is_same_v<T, FieldSet>) {
            maybe_paren(out, context > PREC_SIMPLE, [&] {
              render_expr(out, *x.target, PREC_POSTFIX);
              out << "." << x.field << " = ";
              render_expr(out, *x.value, PREC_SIMPLE);
            });
          } else if constexpr (std::is_same_v<T, Call>) {
            render_expr(out, *x.target, PREC_POSTFIX);
            out << "." << x.method;
            render_args(out, x.args);
          } else if constexpr (std::is_same_v<T, New>) {
            out << "new " << x.class_name;
            render_args(out, x.args);
          } else if constexpr (std::is_same_v<T, Seq>) {
            maybe_paren(out, context > PREC_SEQ, [&] {
              for (size_t i = 0; i < x.items.size(); ++i) {
                if (i) out << "; ";
                render_expr(out, *x.items[i], PREC_SIMPLE);
              }
            });
          } else if constexpr (std::is_same_v<T, If>) {
            out << "if (";
            render_expr(out, *x.cond, PREC_SEQ);
            out << ") { ";
            render_expr(out, *x.then_branch, PREC_SEQ);
            out << " }";
            if (x.else_branch) {
              out << " else { ";
              render_expr(out, *x.else_branch, PREC_SEQ);
              out << " }";
            }
          } else if constexpr (std::is_same_v<T, Print>) {
            out << "print(";
            render_expr(out, *x.arg, PREC_SEQ);
            out << ")";
          } else if constexpr (std::is_same_v<T, BinOp>) {
            bool eq = x.op == BinKind::Eq;
            int level = eq ? PREC_EQ : PREC_ADD;
            maybe_paren(out, context > level, [&] {
              render_expr(out, *x.lhs, level);
              out << (eq ? " == " : " + ");
              render_expr(out, *x.rhs, level + 1);
            });
          } else if constexpr (std::is_same_v<T, Proceed>) {
            out << "proceed";
            render_args(out, x.args);
          }
        },
        e.node);
  }

  void render_args(std::ostream& out, const std::vector<ExprPtr>& args) {
    out << "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out << ", ";
      render_expr(out, *args[i], PREC_SIMPLE);
    }
    out << ")";
  }

  template <class F>
  void maybe_paren(std::ostream& out, bool need, F&& body) {
    if (need) out << "(";
    body();
    if (need) out << ")";
  }
};

inline std::string pretty_print(const Program& prog) { return Printer().render(prog); }

inline std::string pretty_print(const std::vector<ClassDecl>& classes,
                                const std::string& module = "") {
  return Printer().render(Program{module, classes});
}

inline std::string pretty_print(const Expr& e) { return Printer().render_expr(e); }

}  // namespace crx::minj
