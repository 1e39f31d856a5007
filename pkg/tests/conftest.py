import re

from sejc.frontend import parse_workspace
from sejc.reader import read_sexprs
from sejc.values import ACL2, Symbol

F_SRC = """
(defun f (x y)
  (declare (xargs :guard (and (acl2-numberp x) (acl2-numberp y))))
  (* x (+ y 3)))
"""

F_MAIN = F_SRC + "(function-type-main f (:anumber :anumber) (:anumber))\n"

F_OVERLOADED = F_MAIN + """
(function-type-other f (:arational :arational) (:arational))
(function-type-other f (:ainteger :ainteger) (:ainteger))
"""

G_SRC = "(defun g (x y) (let ((z (cons x y))) (if (equal x y) x z)))\n"

H_SRC = "(defun h () (let ((x 1)) (let ((x (+ x 1))) (* 2 x))))\n"

FACT_SRC = """
(defun fact-tail (n r)
  (declare (xargs :guard (and (natp n) (natp r))))
  (if (zp n) r (fact-tail (1- n) (* n r))))
(function-type-main fact-tail (:ainteger :ainteger) (:ainteger))
"""

I_SRC = """
(defun i (x y)
  (declare (xargs :guard (and (int-valuep x) (int-valuep y))))
  (int-add (int-mul (int-value 2) x) (int-mul y y)))
(function-type-main i (:jint :jint) (:jint))
"""

MV_SRC = """
(defun two (x)
  (declare (xargs :guard (integerp x)))
  (mv x 'sym))
(function-type-main two (:ainteger) (:ainteger :asymbol))
(defun use-two (x)
  (declare (xargs :guard (integerp x)))
  (mv-let (a b) (two x) (cons b a)))
(function-type-main use-two (:ainteger) (:acons))
"""

PQ_SRC = """
(defpkg "P" '(cons binary-+))
(in-package "P")
(defun f (x) (g x))
(defun g (x) (cons x x))
(defpkg "Q" '(p::g binary-+))
(in-package "Q")
(defun f (x) (g (p::f x)))
"""


def world_of(src, **kw):
    return parse_workspace(read_sexprs(src), **kw)


def sym(name, package=ACL2):
    return Symbol(package, name.upper())


def tokens(text):
    """Whitespace-normalized token list of Java text, comments dropped."""
    text = re.sub(r"//[^\n]*", "", text)
    return re.findall(r"[A-Za-z_$][\w$]*|\d+|\"(?:\\.|[^\"\\])*\"|'(?:\\.|[^'\\])*'|\S", text)

