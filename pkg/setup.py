"""
gridcast Setup Script
Guided setup for the hourly electricity-demand forecasting toolkit
"""

import os
import shutil
import subprocess
import sys


def print_header(text):
    """Print formatted header"""
    print("\n" + "=" * 70)
    print(f"  {text}")
    print("=" * 70 + "\n")


def print_step(step_num, text):
    print(f"\n[Step {step_num}] {text}")
    print("-" * 70)


def run_command(command, description=""):
    """Run a command and report its output"""
    if description:
        print(f"  ➤ {description}")

    try:
        result = subprocess.run(command, check=True, capture_output=True, text=True)
        if result.stdout:
            print(f"    {result.stdout.strip()}")
        return True
    except (subprocess.CalledProcessError, OSError) as e:
        print(f"    ❌ Error: {e}")
        if getattr(e, "stderr", None):
            print(f"    {e.stderr.strip()}")
        return False


def check_python_version():
    print_step(1, "Checking Python Version")

    version = sys.version_info
    print(f"  Python version: {version.major}.{version.minor}.{version.micro}")

    if version >= (3, 10):
        print("  ✅ Python version is compatible (3.10+)")
        return True
    print("  ❌ Python 3.10 or higher is required")
    return False


def install_dependencies():
    """Install Python dependencies"""
    print_step(2, "Installing Dependencies")

    if not os.path.exists("requirements.txt"):
        print("  ❌ requirements.txt not found")
        return False

    print("  Installing packages from requirements.txt...\n")
    success = run_command(
        [sys.executable, "-m", "pip", "install", "-r", "requirements.txt"],
        "Installing numpy, pandas, scipy, scikit-learn, click, pydantic...",
    )

    if success:
        print("\n  ✅ Dependencies installed successfully")
    else:
        print("\n  ❌ Failed to install some dependencies")
        print("  Try running manually: pip install -r requirements.txt")
    return success


def setup_environment():
    """Create .env from .env.example"""
    print_step(3, "Setting Up Environment")

    if os.path.exists(".env"):
        print("  ✅ .env file already exists, keeping it")
        return True

    if not os.path.exists(".env.example"):
        print("  ❌ .env.example not found")
        return False

    shutil.copy(".env.example", ".env")
    print("  ✅ Created .env from .env.example")
    print("\n  ⚠️  Point GRIDCAST_DATA_PATH at the hourly energy CSV if you have it")
    return True


def create_directories():
    print_step(4, "Creating Required Directories")

    for directory in ("data", "outputs"):
        os.makedirs(directory, exist_ok=True)
        print(f"  ✓ {directory}")

    print("\n  ✅ Directories created")
    return True


def generate_sample_data():
    """Write a synthetic load CSV so every command can run without the public dataset"""
    print_step(5, "Generating Synthetic Data")

    target = os.path.join("data", "synthetic_load.csv")
    if os.path.exists(target):
        print(f"  ✅ {target} already exists")
        return True

    success = run_command(
        [sys.executable, "run.py", "synth", "--data", target, "--log-level", "WARNING"],
        "Generating 5000 hours of seeded synthetic load",
    )
    if success:
        print(f"  ✅ Synthetic data written to {target}")
    else:
        print("  ❌ Could not generate synthetic data")
        print(f"  You can run it manually later: python run.py synth --data {target}")
    return success


def print_next_steps():
    print_header("Setup Complete! 🎉")

    print("Next Steps:")
    print("\n1. Get the data (optional):")
    print("   • Download energy_dataset.csv (hourly Spanish load, 2015-2018)")
    print("   • Save it as data/energy_dataset.csv")

    print("\n2. Try the pipeline on synthetic data:")
    print("   python run.py summarize --data data/synthetic_load.csv")
    print("   python run.py compare --data data/synthetic_load.csv --models ar,ma,persistence")

    print("\n3. Train the LSTM:")
    print("   python run.py train")

    print("\n4. Run the tests:")
    print('   pytest -m "not slow"')

    print("\n" + "=" * 70)
    print("\nFor more information, see README.md")
    print("=" * 70 + "\n")


def main():
    print_header("gridcast - Guided Setup")

    print("This script will:")
    print("  ✓ Check the Python version")
    print("  ✓ Install dependencies")
    print("  ✓ Create .env and the data/outputs directories")
    print("  ✓ Generate a synthetic load dataset")

    response = input("\nContinue with setup? (y/n): ").lower()
    if response != "y":
        print("\nSetup cancelled.")
        return

    steps_passed = 0
    total_steps = 5

    if check_python_version():
        steps_passed += 1
    else:
        print("\n❌ Setup failed: Incompatible Python version")
        return

    if install_dependencies():
        steps_passed += 1
    else:
        print("\n❌ Setup failed: Could not install dependencies")
        return

    if setup_environment():
        steps_passed += 1

    if create_directories():
        steps_passed += 1

    if generate_sample_data():
        steps_passed += 1

    print(f"\n{'=' * 70}")
    print(f"Setup Progress: {steps_passed}/{total_steps} steps completed")
    print("=" * 70)

    if steps_passed == total_steps:
        print_next_steps()
    else:
        print("\n⚠️  Setup completed with some warnings.")
        print("Please review the messages above and fix any issues.")


if __name__ == "__main__":
    main()
