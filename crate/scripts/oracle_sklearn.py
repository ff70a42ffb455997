"""Reference metrics from pandas + scikit-learn for the parity tests.

Follows the reference listing: drop id/attack_cat, one-hot proto/service/state,
80/20 split with random_state=42, default LogisticRegression(max_iter=10000)
and RandomForestClassifier(random_state=42). Prints JSON with test accuracy
and ROC AUC per model.

    python scripts/oracle_sklearn.py data.csv > oracle.json
"""

import json
import sys
import time

import pandas as pd
import sklearn
from sklearn.ensemble import RandomForestClassifier
from sklearn.linear_model import LogisticRegression
from sklearn.metrics import accuracy_score, roc_auc_score
from sklearn.model_selection import train_test_split


def main(path, seed=42):
    df = pd.read_csv(path)
    df = df.drop(columns=["id", "attack_cat"])
    df = pd.get_dummies(df, columns=["proto", "service", "state"])
    X = df.drop(columns=["label"])
    y = df["label"]
    X_train, X_test, y_train, y_test = train_test_split(X, y, test_size=0.2, random_state=seed)

    result = {
        "source": path,
        "rows": int(len(df)),
        "seed": seed,
        "sklearn": sklearn.__version__,
    }
    models = {
        "logistic": LogisticRegression(max_iter=10000),
        "forest": RandomForestClassifier(random_state=seed),
    }
    for name, model in models.items():
        start = time.time()
        model.fit(X_train, y_train)
        proba = model.predict_proba(X_test)[:, 1]
        result[name] = {
            "accuracy": float(accuracy_score(y_test, model.predict(X_test))),
            "auc": float(roc_auc_score(y_test, proba)),
            "seconds": round(time.time() - start, 2),
        }
    return result


if __name__ == "__main__":
    json.dump(main(sys.argv[1]), sys.stdout, indent=2)
    sys.stdout.write("\n")
