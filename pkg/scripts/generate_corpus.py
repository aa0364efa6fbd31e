"""Generate synthetic notebooks: study-style fixtures and random corpora.

Run directly to (re)create tests/fixtures; tests import the generator to
build seeded random corpora in temp directories.
"""

import json
import random
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def code_cell(source, outputs=None):
    return {
        "cell_type": "code",
        "execution_count": None,
        "metadata": {},
        "source": source,
        "outputs": outputs or [],
    }


def md_cell(source):
    return {"cell_type": "markdown", "metadata": {}, "source": source}


def notebook(cells):
    return {
        "nbformat": 4,
        "nbformat_minor": 5,
        "metadata": {"language_info": {"name": "python"}},
        "cells": cells,
    }


def png_output():
    return {
        "output_type": "display_data",
        "data": {"image/png": "iVBORw0KGgoAAAANSUhEUg=="},
        "metadata": {},
    }


def df_output():
    return {
        "output_type": "execute_result",
        "execution_count": 1,
        "data": {
            "text/plain": "   price  rooms\n0  21000      3\n1  45000      4"
        },
        "metadata": {},
    }


def tiny():
    return notebook([
        code_cell("import pandas as pd\n"),
        code_cell("df = pd.read_csv('data.csv')\n"),
    ])


def study_movies():
    """Stand-in for a movie-rating prediction analysis notebook."""
    return notebook([
        md_cell("# Data Loading\nWe load the movie metadata and ratings tables."),
        code_cell("import pandas as pd\nimport numpy as np\nimport matplotlib.pyplot as plt\nimport seaborn as sns\n"),
        code_cell("movies = pd.read_csv('movies.csv')\nratings = pd.read_csv('ratings.csv')\n"),
        code_cell("movies.head()\n", [df_output()]),
        md_cell("# Cleaning\nWe drop duplicates and fill missing budgets before the analysis."),
        code_cell("movies = movies.drop_duplicates()\nmovies['budget'] = movies['budget'].fillna(0)\n"),
        code_cell("movies['title'] = movies['title'].str.strip()\n"),
        code_cell("movies.describe()\n", [df_output()]),
        md_cell("# Exploratory Visualization\nWe inspect rating distributions and their relation to budget."),
        code_cell("plt.hist(ratings['rating'])\nplt.show()\n", [png_output()]),
        code_cell("sns.scatterplot(x='budget', y='rating', data=movies)\n", [png_output()]),
        md_cell("# Modelling\nWe define cross-validation strategies and select models for training. "
                "We compare a random forest against a linear baseline. "
                "We keep the split deterministic for reproducibility."),
        code_cell("from sklearn.model_selection import train_test_split\n"
                  "from sklearn.ensemble import RandomForestRegressor\n"
                  "from sklearn.metrics import mean_squared_error\n"),
        code_cell("X_train, X_test, y_train, y_test = train_test_split(X, y)\n"),
        code_cell("model = RandomForestRegressor()\nmodel.fit(X_train, y_train)\n"),
        code_cell("pred = model.predict(X_test)\nnp.mean(mean_squared_error(y_test, pred))\n"),
        md_cell("# Evaluation\nWe verify the predictions against the held-out ratings."),
        code_cell("print(mean_squared_error(y_test, pred))\n"),
        code_cell("plt.plot(y_test, pred)\nplt.show()\n", [png_output()]),
    ])


def study_houses():
    """Stand-in for a house-price prediction analysis notebook."""
    return notebook([
        md_cell("# Load Data\nWe read the training and test sets for the price analysis."),
        code_cell("import pandas as pd\nimport numpy as np\nimport seaborn as sns\nimport matplotlib.pyplot as plt\nfrom scipy import stats\n"),
        code_cell("train = pd.read_csv('train.csv')\ntest = pd.read_csv('test.csv')\n"),
        code_cell("train.head()\n", [df_output()]),
        md_cell("# Feature Engineering\nWe transform skewed features and encode categorical columns. "
                "We log-transform the sale price to stabilise the variance."),
        code_cell("train['SalePrice'] = np.log1p(train['SalePrice'])\n"),
        code_cell("def encode(df):\n    return pd.get_dummies(df)\n"),
        code_cell("train = encode(train)\ntest = encode(test)\n"),
        code_cell("train = train.fillna(0).sort_values('Id')\n"),
        code_cell("train.describe()\n", [df_output()]),
        md_cell("# Exploratory Visualization\nWe look at the price distribution and correlations."),
        code_cell("sns.histplot(train['SalePrice'])\n", [png_output()]),
        code_cell("sns.heatmap(train.corr())\n", [png_output()]),
        code_cell("stats.probplot(train['SalePrice'], plot=plt)\n", [png_output()]),
        md_cell("# Modelling & Evaluation\nWe define cross-validation strategies and select models for training. "
                "We fit gradient boosting and lasso models and compare their errors."),
        code_cell("from sklearn.model_selection import train_test_split, cross_val_score\n"
                  "from sklearn.ensemble import GradientBoostingRegressor\n"
                  "from sklearn.linear_model import Lasso\n"),
        code_cell("X_train, X_test, y_train, y_test = train_test_split(X, y)\n"),
        code_cell("gbr = GradientBoostingRegressor()\ngbr.fit(X_train, y_train)\n"),
        code_cell("lasso = Lasso()\nlasso.fit(X_train, y_train)\n"),
        code_cell("pred = gbr.predict(X_test)\n"),
        code_cell("print(np.mean(cross_val_score(gbr, X, y)))\n"),
        md_cell("# Ensemble Methods\nWe average the two models for the final submission."),
        code_cell("final = 0.7 * gbr.predict(test) + 0.3 * lasso.predict(test)\n"),
        code_cell("submission.to_csv('submission.csv')\n"),
    ])


# Building blocks for random synthetic notebooks. Each snippet is a code
# cell source; names resolve through the seed catalog.
_SNIPPETS = [
    "import pandas as pd\n",
    "import numpy as np\n",
    "df = pd.read_csv('data.csv')\n",
    "df = df.dropna()\n",
    "df = df.sort_values('a')\n",
    "df.describe()\n",
    "df.head()\n",
    "x = np.mean(df['a'])\n",
    "plt.hist(df['a'])\n",
    "sns.scatterplot(x='a', y='b', data=df)\n",
    "X_train, X_test, y_train, y_test = train_test_split(X, y)\n",
    "model.fit(X_train, y_train)\n",
    "pred = model.predict(X_test)\n",
    "print(accuracy_score(y_test, pred))\n",
    "scaler = StandardScaler()\n",
    "df['b'] = df['b'].fillna(0)\n",
    "df = df.rename(columns={'a': 'b'})\n",
    "np.log(df['a'])\n",
    "df.to_csv('out.csv')\n",
    "scipy.stats.ttest_ind(a, b)\n",
    "df.groupby('a').agg('mean')\n",
    "unknown_helper(df)\n",
]

_MD_SNIPPETS = [
    "# Preparation\nSome notes about the data.",
    "# Modelling\nWe train a model on the prepared data.",
    "Plain commentary without a header.",
    "# Results\nWe summarise the findings here.",
]


def random_notebook(rng: random.Random, max_cells: int = 30) -> dict:
    n = rng.randint(1, max_cells)
    cells = []
    for _ in range(n):
        if rng.random() < 0.2:
            cells.append(md_cell(rng.choice(_MD_SNIPPETS)))
        else:
            lines = "".join(rng.choice(_SNIPPETS) for _ in range(rng.randint(1, 3)))
            cells.append(code_cell(lines))
    return notebook(cells)


def generate_corpus(directory: Path, count: int = 20, seed: int = 7, max_cells: int = 30):
    rng = random.Random(seed)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(count):
        path = directory / f"synthetic_{i:02d}.ipynb"
        path.write_text(json.dumps(random_notebook(rng, max_cells), indent=1))
        paths.append(path)
    return paths


def write_fixtures():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "tiny.ipynb").write_text(json.dumps(tiny(), indent=1))
    (FIXTURES / "study_m.ipynb").write_text(json.dumps(study_movies(), indent=1))
    (FIXTURES / "study_h.ipynb").write_text(json.dumps(study_houses(), indent=1))
    (FIXTURES / "corrupt.ipynb").write_text("{not valid json")
    old = {"nbformat": 3, "worksheets": []}
    (FIXTURES / "old_format.ipynb").write_text(json.dumps(old))
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    write_fixtures()
